//! Weighted additive spanners and emulators.
//!
//! Constructions:
//!
//! * [`greedy::greedy_multiplicative`]: greedy `(2k-1)`-spanner.
//! * [`greedy::build_6eps_spanner`]: deterministic `+(6+eps)W` spanner.
//! * [`greedy::build_subsetwise_spanner`]: `+(2+eps)W` on `S x S`.
//! * [`greedy::build_poly_spanner`]: linear-size `+O(n^{(1-eps)/2} log n)W`.
//! * [`fast2w::build_fast_2w`]: randomized `+2W` spanner.
//! * [`emulator::build_4w_emulator`]: randomized `+4W` emulator.
//!
//! [`verify`] certifies the stretch of any of them by exact all-pairs
//! shortest paths, where `W_{u,v}` is the heaviest edge on the canonical
//! shortest `u`-`v` path of [`paths`].

// the sequential prelude is empty
#![cfg_attr(not(feature = "parallel"), allow(unused_imports))]

pub mod bench;
pub mod emulator;
pub mod error;
pub mod fast2w;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod light;
pub mod par;
pub mod paths;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{normalize_weights, Edge, WeightedGraph};
pub use paths::{build_index, sssp_canonical, CanonicalPath, ShortestPathIndex, INF};
