//! Randomized +4W emulator: a heavy light initialization plus a clique on a
//! sampled vertex set, the clique edges weighted by exact graph distances.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::light::t_light_init;
use crate::par::prelude::*;
use crate::paths::{sssp_distances, INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Edge of the input graph with its original weight.
    Graph,
    /// Pair of sampled vertices weighted by their distance in the input.
    Virtual,
}

impl EdgeKind {
    pub fn tag(self) -> char {
        match self {
            EdgeKind::Graph => 'g',
            EdgeKind::Virtual => 'v',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmulatorEdge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct EmulatorResult {
    pub n: usize,
    pub edges: Vec<EmulatorEdge>,
    pub t: usize,
    pub probability: f64,
    pub seed: u64,
    pub sampled: Vec<usize>,
}

impl EmulatorResult {
    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph::new(self.n, self.edges.iter().map(|e| (e.u, e.v, e.w)))
            .expect("emulator edges are distinct with positive weights")
    }

    pub fn virtual_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Virtual)
            .count()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Light-initialization size `ceil(2 n^{1/3} ln n)`, at least 1.
pub fn emulator_t(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let nf = n as f64;
    ((2.0 * nf.cbrt() * nf.ln()).ceil() as usize).max(1)
}

/// Builds the emulator. Sampling uses ChaCha8 stream 0 of `seed`, one `u64`
/// per vertex in id order, keeping vertices with probability `n^{-1/3}`.
pub fn build_4w_emulator(g: &WeightedGraph, seed: u64) -> Result<EmulatorResult> {
    let n = g.n();
    let t = emulator_t(n);
    let probability = if n == 0 { 1.0 } else { (n as f64).cbrt().recip() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let sampled: Vec<usize> = (0..n)
        .filter(|_| ((rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)) < probability)
        .collect();

    let mut edges: BTreeMap<(usize, usize), EmulatorEdge> = BTreeMap::new();
    let li = t_light_init(g, t)?;
    for (e, &k) in g.edges().iter().zip(li.kept_mask()) {
        if k {
            edges.insert(
                e.key(),
                EmulatorEdge {
                    u: e.u,
                    v: e.v,
                    w: e.w,
                    kind: EdgeKind::Graph,
                },
            );
        }
    }

    let rows: Vec<Vec<f64>> = crate::slice_iter!(sampled)
        .map(|&a| sssp_distances(g, a))
        .collect();
    for (i, &a) in sampled.iter().enumerate() {
        for &b in &sampled[i + 1..] {
            let d = rows[i][b];
            if d == INF {
                continue;
            }
            edges
                .entry((a, b))
                .and_modify(|e| {
                    if d < e.w {
                        e.w = d;
                        e.kind = EdgeKind::Virtual;
                    }
                })
                .or_insert(EmulatorEdge {
                    u: a,
                    v: b,
                    w: d,
                    kind: EdgeKind::Virtual,
                });
        }
    }
    Ok(EmulatorResult {
        n,
        edges: edges.into_values().collect(),
        t,
        probability,
        seed,
        sampled,
    })
}
