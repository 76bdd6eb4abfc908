//! Switch between rayon and plain iterators.
//!
//! With the `parallel` feature (on by default) these macros expand to rayon
//! parallel iterators; without it they fall back to the sequential std
//! equivalents. Call sites must import [`prelude`] so that both expansions
//! resolve.

pub mod prelude {
    #[cfg(feature = "parallel")]
    pub use rayon::prelude::*;
}

/// `(a..b).into_par_iter()` or `(a..b).into_iter()`.
#[macro_export]
#[doc(hidden)]
macro_rules! range_iter {
    ($r:expr) => {{
        #[cfg(feature = "parallel")]
        let it = $r.into_par_iter();
        #[cfg(not(feature = "parallel"))]
        let it = $r.into_iter();
        it
    }};
}

/// `slice.par_iter()` or `slice.iter()`.
#[macro_export]
#[doc(hidden)]
macro_rules! slice_iter {
    ($s:expr) => {{
        #[cfg(feature = "parallel")]
        let it = $s.par_iter();
        #[cfg(not(feature = "parallel"))]
        let it = $s.iter();
        it
    }};
}

/// `slice.par_chunks_mut(n)` or `slice.chunks_mut(n)`.
#[macro_export]
#[doc(hidden)]
macro_rules! chunks_mut {
    ($s:expr, $n:expr) => {{
        #[cfg(feature = "parallel")]
        let it = $s.par_chunks_mut($n);
        #[cfg(not(feature = "parallel"))]
        let it = $s.chunks_mut($n);
        it
    }};
}

/// Whether constructions run data-parallel loops on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
