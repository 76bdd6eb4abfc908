//! Seeded graph generators.
//!
//! All randomness comes from ChaCha8 seeded with [`GenSpec::seed`]. Stream 0
//! drives the structure (edge coin flips, point positions, tree parents) and
//! stream 1 drives weights: the weight of the edge with index `i` in
//! generation order is derived from the `u64` at word position `2 i` of
//! stream 1, so weights do not depend on how much of stream 0 was consumed.
//!
//! Non-unit weights are rounded down to a multiple of 2^-10. Sums of such
//! weights are exact in `f64` at any size this crate handles, so equal-length
//! paths compare equal regardless of summation order.

use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;

const WEIGHT_QUANTUM: f64 = 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gnp,
    Grid,
    Geometric,
    Star,
    Path,
    Complete,
    Tree,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gnp" => Family::Gnp,
            "grid" => Family::Grid,
            "geometric" => Family::Geometric,
            "star" => Family::Star,
            "path" => Family::Path,
            "complete" => Family::Complete,
            "tree" => Family::Tree,
            _ => return Err(invalid(format!("unknown family `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightModel {
    Unit,
    /// Uniform on `[1, wmax]`.
    Uniform,
    /// Log-uniform on `[1, wmax]`, i.e. `wmax^U`.
    ExpSpread,
}

impl WeightModel {
    pub fn default_wmax(self) -> f64 {
        match self {
            WeightModel::Unit => 1.0,
            WeightModel::Uniform => 100.0,
            WeightModel::ExpSpread => 1000.0,
        }
    }
}

impl FromStr for WeightModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "unit" => WeightModel::Unit,
            "uniform" => WeightModel::Uniform,
            "exp-spread" | "exp" => WeightModel::ExpSpread,
            _ => return Err(invalid(format!("unknown weight model `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Edge probability for `gnp`; defaults to average degree `sqrt(n)`.
    pub p: Option<f64>,
    /// Grid width; defaults to `ceil(sqrt(n))`.
    pub cols: Option<usize>,
    /// Connection radius for `geometric`; defaults to `sqrt(2 ln n / (pi n))`.
    pub radius: Option<f64>,
    /// Branching factor for `tree`; random recursive tree when unset.
    pub branching: Option<usize>,
    pub weights: WeightModel,
    pub wmax: Option<f64>,
    pub seed: u64,
    pub largest_component: bool,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, weights: WeightModel, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            p: None,
            cols: None,
            radius: None,
            branching: None,
            weights,
            wmax: None,
            seed,
            largest_component: false,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_branching(mut self, b: usize) -> Self {
        self.branching = Some(b);
        self
    }

    pub fn with_wmax(mut self, w: f64) -> Self {
        self.wmax = Some(w);
        self
    }

    pub fn largest_component(mut self) -> Self {
        self.largest_component = true;
        self
    }

    pub fn wmax(&self) -> f64 {
        self.wmax.unwrap_or(self.weights.default_wmax())
    }
}

/// Edge probability giving expected average degree `sqrt(n)`.
pub fn sqrt_degree_p(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ((n as f64).sqrt() / (n - 1) as f64).min(1.0)
}

fn uniform01(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn quantize(w: f64) -> f64 {
    ((w * WEIGHT_QUANTUM).floor() / WEIGHT_QUANTUM).max(1.0)
}

struct WeightStream {
    rng: ChaCha8Rng,
    model: WeightModel,
    wmax: f64,
}

impl WeightStream {
    fn weight(&mut self, index: usize) -> f64 {
        if self.model == WeightModel::Unit {
            return 1.0;
        }
        self.rng.set_word_pos(2 * index as u128);
        let u = uniform01(self.rng.next_u64());
        let w = match self.model {
            WeightModel::Unit => 1.0,
            WeightModel::Uniform => 1.0 + u * (self.wmax - 1.0),
            WeightModel::ExpSpread => self.wmax.powf(u),
        };
        quantize(w).min(self.wmax)
    }
}

pub fn generate(spec: &GenSpec) -> Result<WeightedGraph> {
    let n = spec.n;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let wmax = spec.wmax();
    if !(wmax.is_finite() && wmax >= 1.0) {
        return Err(invalid(format!("wmax must be >= 1, got {wmax}")));
    }
    let mut structure = ChaCha8Rng::seed_from_u64(spec.seed);
    structure.set_stream(0);
    let mut weight_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    weight_rng.set_stream(1);
    let mut weights = WeightStream {
        rng: weight_rng,
        model: spec.weights,
        wmax,
    };

    let pairs: Vec<(usize, usize)> = match spec.family {
        Family::Gnp => {
            let p = spec.p.unwrap_or_else(|| sqrt_degree_p(n));
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("p must lie in [0, 1], got {p}")));
            }
            let mut out = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if uniform01(structure.next_u64()) < p {
                        out.push((u, v));
                    }
                }
            }
            out
        }
        Family::Grid => {
            let cols = spec
                .cols
                .unwrap_or_else(|| (n as f64).sqrt().ceil() as usize)
                .max(1);
            let mut out = Vec::new();
            for v in 0..n {
                if (v + 1) % cols != 0 && v + 1 < n {
                    out.push((v, v + 1));
                }
                if v + cols < n {
                    out.push((v, v + cols));
                }
            }
            out
        }
        Family::Geometric => return geometric(spec, &mut structure),
        Family::Star => (1..n).map(|v| (0, v)).collect(),
        Family::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Family::Complete => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        Family::Tree => match spec.branching {
            Some(0) => return Err(invalid("branching must be positive")),
            Some(b) => (1..n).map(|v| ((v - 1) / b, v)).collect(),
            None => (1..n)
                .map(|v| ((structure.next_u64() % v as u64) as usize, v))
                .collect(),
        },
    };
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| (u, v, weights.weight(i)))
        .collect::<Vec<_>>();
    finish(spec, WeightedGraph::new(n, edges)?)
}

fn finish(spec: &GenSpec, g: WeightedGraph) -> Result<WeightedGraph> {
    Ok(if spec.largest_component {
        g.largest_component()
    } else {
        g
    })
}

fn geometric(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<WeightedGraph> {
    let n = spec.n;
    let r = spec.radius.unwrap_or_else(|| {
        let nf = n.max(2) as f64;
        (2.0 * nf.ln() / (std::f64::consts::PI * nf)).sqrt()
    });
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (uniform01(rng.next_u64()), uniform01(rng.next_u64())))
        .collect();
    let mut raw = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let d = (pts[u].0 - pts[v].0).hypot(pts[u].1 - pts[v].1);
            if d <= r && d > 0.0 {
                raw.push((u, v, d));
            }
        }
    }
    let min = raw.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let edges = raw.into_iter().map(|(u, v, d)| (u, v, quantize(d / min)));
    finish(spec, WeightedGraph::new(n, edges)?)
}
