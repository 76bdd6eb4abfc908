//! Randomized +2W spanner built from shortest-path trees over degree
//! levels.
//!
//! With `k = ceil(log2(n) / 2)` and thresholds `s_i = n / 2^i`, level `i`
//! holds the vertices of degree at least `s_i` (`V_i`) and a random sample
//! `D_i` in which each vertex appears with probability
//! `min(1, c log2(n) / s_i)`. A vertex of `V_i` pivots on its lightest
//! neighbor in `D_i` and keeps only the incident edges strictly lighter than
//! that pivot edge (its bunch); everything else keeps all incident edges.
//! `E_{i+1}` is the union of level-`i` bunches. The spanner is the union of
//! canonical SPTs rooted at `D_i` in `(V, E_i + E*_i)` for every level, plus
//! all of `E_{k+1}`.
//!
//! Randomness comes from ChaCha8 seeded with the user seed, one stream per
//! level, consuming one `u64` per vertex in id order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::WeightedGraph;
use crate::greedy::{LevelStats, Params, PhaseCount, SpannerResult};
use crate::par::prelude::*;
use crate::paths::sssp_canonical;

/// One sampled level `i` in `1..=k`.
#[derive(Debug, Clone)]
pub struct Level {
    pub index: usize,
    pub threshold: f64,
    pub probability: f64,
    /// Membership flag per vertex for `V_i`.
    pub in_v: Vec<bool>,
    pub sampled: Vec<usize>,
    /// `p_i(v)` and the edge index of `{v, p_i(v)}` for `v` in `V_i`.
    pub pivot: Vec<Option<(usize, usize)>>,
    /// Edge indices of `E*_i`.
    pub pivot_edges: Vec<usize>,
}

impl Level {
    pub fn missing_pivots(&self) -> usize {
        self.in_v
            .iter()
            .zip(&self.pivot)
            .filter(|(&v, p)| v && p.is_none())
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct LevelStructure {
    pub k: usize,
    pub c: f64,
    pub seed: u64,
    pub levels: Vec<Level>,
    /// `edge_levels[j]` flags `E_{j+1}`, for `j` in `0..=k`.
    pub edge_levels: Vec<Vec<bool>>,
}

impl LevelStructure {
    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i - 1]
    }

    /// Edge mask of `E_i`, `i` in `1..=k+1`.
    pub fn e(&self, i: usize) -> &[bool] {
        &self.edge_levels[i - 1]
    }
}

/// Smallest `k` with `4^k >= n`, i.e. `ceil(log2(n) / 2)`.
pub fn level_count(n: usize) -> usize {
    let mut k = 0;
    let mut p: u128 = 1;
    while p < n as u128 {
        p *= 4;
        k += 1;
    }
    k
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_levels(g: &WeightedGraph, c: f64, seed: u64) -> Result<LevelStructure> {
    if !(c.is_finite() && c >= 1.0) {
        return Err(invalid(format!("sampling constant c must be >= 1, got {c}")));
    }
    let n = g.n();
    let k = level_count(n);
    let log_n = (n.max(1) as f64).log2();
    let mut levels = Vec::with_capacity(k);
    let mut edge_levels = vec![vec![true; g.m()]];
    for i in 1..=k {
        let threshold = n as f64 / 2f64.powi(i as i32);
        let probability = (c * log_n / threshold).min(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut in_d = vec![false; n];
        let mut sampled = Vec::new();
        for (v, flag) in in_d.iter_mut().enumerate() {
            if uniform01(&mut rng) < probability {
                *flag = true;
                sampled.push(v);
            }
        }
        let in_v: Vec<bool> = (0..n).map(|v| g.degree(v) as f64 >= threshold).collect();
        let pivot: Vec<Option<(usize, usize)>> = (0..n)
            .map(|v| {
                if !in_v[v] {
                    return None;
                }
                g.neighbors(v)
                    .iter()
                    .filter(|a| in_d[a.to])
                    .min_by(|a, b| a.w.total_cmp(&b.w).then(a.to.cmp(&b.to)))
                    .map(|a| (a.to, a.eid))
            })
            .collect();
        let pivot_edges = pivot.iter().flatten().map(|&(_, eid)| eid).collect();
        let mut next = vec![false; g.m()];
        for (v, piv) in pivot.iter().enumerate() {
            match *piv {
                Some((p, _)) => {
                    let cut = g.weight(v, p).expect("pivot is a neighbor");
                    for a in g.neighbors(v).iter().filter(|a| a.w < cut) {
                        next[a.eid] = true;
                    }
                }
                // outside V_i, or no sampled neighbor: keep everything
                None => {
                    for a in g.neighbors(v) {
                        next[a.eid] = true;
                    }
                }
            }
        }
        edge_levels.push(next);
        levels.push(Level {
            index: i,
            threshold,
            probability,
            in_v,
            sampled,
            pivot,
            pivot_edges,
        });
    }
    Ok(LevelStructure {
        k,
        c,
        seed,
        levels,
        edge_levels,
    })
}

pub fn build_fast_2w(g: &WeightedGraph, c: f64, seed: u64) -> Result<SpannerResult> {
    let ls = sample_levels(g, c, seed)?;
    Ok(build_from_levels(g, &ls))
}

/// Runs the SPT phase over an already sampled level structure.
pub fn build_from_levels(g: &WeightedGraph, ls: &LevelStructure) -> SpannerResult {
    let mut keep = vec![false; g.m()];
    let mut phases = Vec::new();
    let mut stats = Vec::new();
    let mut count = 0;
    for level in &ls.levels {
        let mut mask = ls.e(level.index).to_vec();
        for &eid in &level.pivot_edges {
            mask[eid] = true;
        }
        let sub = g.edge_subgraph(&mask);
        let trees: Vec<Vec<usize>> = crate::slice_iter!(level.sampled)
            .map(|&r| {
                let t = sssp_canonical(&sub, r);
                t.parent
                    .iter()
                    .enumerate()
                    .filter_map(|(v, p)| p.map(|p| g.find(v, p).expect("edge of g").eid))
                    .collect()
            })
            .collect();
        let before = count;
        for eid in trees.into_iter().flatten() {
            if !keep[eid] {
                keep[eid] = true;
                count += 1;
            }
        }
        phases.push(PhaseCount {
            phase: format!("spt_{}", level.index),
            edges: count - before,
        });
        stats.push(LevelStats {
            level: level.index,
            v_i: level.in_v.iter().filter(|&&x| x).count(),
            d_i: level.sampled.len(),
            e_i: ls.e(level.index).iter().filter(|&&x| x).count(),
            missing_pivots: level.missing_pivots(),
        });
    }
    let last = ls.e(ls.k + 1);
    let before = count;
    for (eid, &x) in last.iter().enumerate() {
        if x && !keep[eid] {
            keep[eid] = true;
            count += 1;
        }
    }
    phases.push(PhaseCount {
        phase: "final_level".into(),
        edges: count - before,
    });
    stats.push(LevelStats {
        level: ls.k + 1,
        v_i: g.n(),
        d_i: 0,
        e_i: last.iter().filter(|&&x| x).count(),
        missing_pivots: 0,
    });
    SpannerResult {
        graph: g.edge_subgraph(&keep),
        params: Params {
            c: Some(ls.c),
            seed: Some(ls.seed),
            k: Some(ls.k),
            ..Params::named("fast2w")
        },
        paths_added: Vec::new(),
        phases,
        levels: stats,
    }
}
