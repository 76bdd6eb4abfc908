//! t-light initialization: every vertex keeps its `t` lightest incident
//! edges, ties broken by neighbor id.

use crate::error::{invalid, Result};
use crate::graph::{EdgeSelection, WeightedGraph};

#[derive(Debug, Clone)]
pub struct LightInit {
    t: usize,
    /// Per-vertex selection as `(neighbor, weight)`, sorted by
    /// `(weight, neighbor)`.
    light_neighbors: Vec<Vec<(usize, f64)>>,
    /// Flag per edge index of the host graph.
    kept: Vec<bool>,
    kept_count: usize,
}

/// Selects the `t` lightest incident edges of every vertex. An edge is kept
/// when either endpoint selects it.
pub fn t_light_init(g: &WeightedGraph, t: usize) -> Result<LightInit> {
    if t == 0 {
        return Err(invalid("t-light initialization needs t >= 1"));
    }
    let mut kept = vec![false; g.m()];
    let mut light_neighbors = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut inc: Vec<_> = g.neighbors(v).to_vec();
        inc.sort_by(|a, b| a.w.total_cmp(&b.w).then(a.to.cmp(&b.to)));
        inc.truncate(t);
        for a in &inc {
            kept[a.eid] = true;
        }
        light_neighbors.push(inc.iter().map(|a| (a.to, a.w)).collect());
    }
    let kept_count = kept.iter().filter(|&&k| k).count();
    Ok(LightInit {
        t,
        light_neighbors,
        kept,
        kept_count,
    })
}

impl LightInit {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn light_neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.light_neighbors[u]
    }

    /// Whether `u` itself selected the edge to `v`.
    pub fn selected_by(&self, u: usize, v: usize) -> bool {
        self.light_neighbors
            .get(u)
            .is_some_and(|l| l.iter().any(|&(x, _)| x == v))
    }

    /// `{u, v}` is in the initialization, selected from either side.
    pub fn is_t_light_neighbor(&self, u: usize, v: usize) -> bool {
        self.selected_by(u, v) || self.selected_by(v, u)
    }

    pub fn kept_mask(&self) -> &[bool] {
        &self.kept
    }

    pub fn kept_count(&self) -> usize {
        self.kept_count
    }

    pub fn kept_edges(&self, g: &WeightedGraph) -> WeightedGraph {
        g.edge_subgraph(&self.kept)
    }

    /// Seeds `sel` with the kept edges.
    pub fn apply(&self, sel: &mut EdgeSelection<'_>) {
        for (eid, &k) in self.kept.iter().enumerate() {
            if k {
                sel.insert(eid);
            }
        }
    }
}

/// Smallest integer `t >= 1` with `t >= n^exp`, robust to the rounding of
/// `powf` at exact powers (so `ceil_pow(64, 1/3) == 4`).
pub fn ceil_pow(n: usize, exp: f64) -> usize {
    let x = (n as f64).powf(exp);
    let mut t = x.ceil().max(1.0) as usize;
    while t > 1 && ((t - 1) as f64) >= x * (1.0 - 1e-12) {
        t -= 1;
    }
    t
}
