//! Single-source and all-pairs shortest paths with canonical tie-breaking.
//!
//! Every path is ranked by a [`PathKey`]: total weight first, then hop
//! count, then two integer sums derived from the endpoint ids of its edges.
//! All four components are additive over edges and independent of the
//! direction of travel, so the minimum-key path between two vertices is
//! unique (up to a 2^-64 hash collision), is the same path from either end,
//! and restricts to the minimum-key path on every subpath. Two such paths
//! therefore meet in at most one contiguous run.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par::prelude::*;

/// Marker for unreachable vertices.
pub const INF: f64 = f64::INFINITY;

const NO_PARENT: u32 = u32::MAX;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Lexicographic, edge-additive ranking of a path.
#[derive(Debug, Clone, Copy)]
pub struct PathKey {
    pub dist: f64,
    pub hops: u32,
    pub ids: u128,
    pub salt: u128,
}

impl PathKey {
    pub const ZERO: PathKey = PathKey {
        dist: 0.0,
        hops: 0,
        ids: 0,
        salt: 0,
    };

    /// Key of this path extended by the edge `{a, b}` of weight `w`.
    #[inline]
    pub fn extend(self, a: usize, b: usize, w: f64) -> PathKey {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let tag = ((lo as u64) << 32) | (hi as u64 & 0xffff_ffff);
        PathKey {
            dist: self.dist + w,
            hops: self.hops + 1,
            ids: self.ids + tag as u128,
            salt: self.salt + splitmix64(tag) as u128,
        }
    }
}

impl Ord for PathKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.hops.cmp(&other.hops))
            .then(self.ids.cmp(&other.ids))
            .then(self.salt.cmp(&other.salt))
    }
}

impl PartialOrd for PathKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for PathKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PathKey {}

/// Canonical shortest-path tree from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct Sssp {
    pub source: usize,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
    pub hops: Vec<u32>,
}

/// Dijkstra over [`PathKey`]s from `s`. Unreachable vertices get [`INF`]
/// and no parent.
///
/// # Panics
///
/// If `s >= g.n()`.
pub fn sssp_canonical(g: &WeightedGraph, s: usize) -> Sssp {
    let n = g.n();
    assert!(s < n, "source {s} out of range");
    let mut best: Vec<Option<PathKey>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[s] = Some(PathKey::ZERO);
    heap.push(Reverse((PathKey::ZERO, s)));
    while let Some(Reverse((key, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for a in g.neighbors(x) {
            if done[a.to] {
                continue;
            }
            let cand = key.extend(x, a.to, a.w);
            if best[a.to].is_none_or(|b| cand < b) {
                best[a.to] = Some(cand);
                parent[a.to] = Some(x);
                heap.push(Reverse((cand, a.to)));
            }
        }
    }
    Sssp {
        source: s,
        dist: best.iter().map(|k| k.map_or(INF, |k| k.dist)).collect(),
        hops: best.iter().map(|k| k.map_or(u32::MAX, |k| k.hops)).collect(),
        parent,
    }
}

/// Growable adjacency lists, for graphs that change during a construction.
#[derive(Debug, Clone, Default)]
pub struct AdjList {
    lists: Vec<Vec<(usize, f64)>>,
}

impl AdjList {
    pub fn new(n: usize) -> Self {
        AdjList {
            lists: vec![Vec::new(); n],
        }
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        let mut a = AdjList::new(g.n());
        for e in g.edges() {
            a.add_edge(e.u, e.v, e.w);
        }
        a
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) {
        self.lists[u].push((v, w));
        self.lists[v].push((u, w));
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.lists[v]
    }
}

/// Reusable scratch space for plain (untied) Dijkstra queries. Only the
/// entries touched by a query are reset afterwards.
#[derive(Debug, Clone)]
pub struct DijkstraScratch {
    dist: Vec<f64>,
    touched: Vec<usize>,
    heap: BinaryHeap<Reverse<(OrdF64, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl DijkstraScratch {
    pub fn new(n: usize) -> Self {
        DijkstraScratch {
            dist: vec![INF; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = INF;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Distance from `s` to `t` in `adj` if it is at most `bound`, otherwise
    /// [`INF`]. The search stops as soon as `t` is settled or the frontier
    /// passes `bound`.
    pub fn distance_within(&mut self, adj: &AdjList, s: usize, t: usize, bound: f64) -> f64 {
        self.reset();
        if s == t {
            return 0.0;
        }
        self.dist[s] = 0.0;
        self.touched.push(s);
        self.heap.push(Reverse((OrdF64(0.0), s)));
        while let Some(Reverse((OrdF64(d), x))) = self.heap.pop() {
            if d > self.dist[x] {
                continue;
            }
            if d > bound {
                break;
            }
            if x == t {
                return d;
            }
            for &(y, w) in adj.neighbors(x) {
                let nd = d + w;
                if nd < self.dist[y] {
                    if self.dist[y] == INF {
                        self.touched.push(y);
                    }
                    self.dist[y] = nd;
                    self.heap.push(Reverse((OrdF64(nd), y)));
                }
            }
        }
        INF
    }
}

/// Plain single-source distances (no tie-breaking bookkeeping).
pub fn sssp_distances(g: &WeightedGraph, s: usize) -> Vec<f64> {
    let mut dist = vec![INF; g.n()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse((OrdF64(0.0), s)));
    while let Some(Reverse((OrdF64(d), x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for a in g.neighbors(x) {
            let nd = d + a.w;
            if nd < dist[a.to] {
                dist[a.to] = nd;
                heap.push(Reverse((OrdF64(nd), a.to)));
            }
        }
    }
    dist
}

/// Row-major `n x n` distance matrix of `g`, one Dijkstra per source.
pub fn apsp_distances(g: &WeightedGraph) -> Vec<f64> {
    let rows: Vec<Vec<f64>> = crate::range_iter!(0..g.n())
        .map(|s| sssp_distances(g, s))
        .collect();
    rows.concat()
}

/// A canonical shortest path, listed from its first to its last vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPath {
    pub vertices: Vec<usize>,
    pub total_weight: f64,
    /// Heaviest edge on the path (`W_{u,v}`); zero for a single vertex.
    pub max_edge_weight: f64,
}

impl CanonicalPath {
    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

/// All-pairs distances, canonical parents and heaviest-edge weights.
#[derive(Debug, Clone)]
pub struct ShortestPathIndex {
    n: usize,
    dist: Vec<f64>,
    wmax: Vec<f64>,
    parent: Vec<u32>,
}

/// Runs [`sssp_canonical`] from every vertex and records, for each pair,
/// the heaviest edge on its canonical path.
pub fn build_index(g: &WeightedGraph) -> ShortestPathIndex {
    let n = g.n();
    assert!(n < NO_PARENT as usize, "graph too large for the index");
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<u32>)> = crate::range_iter!(0..n)
        .map(|s| {
            let t = sssp_canonical(g, s);
            // settle order = nondecreasing key, so parents come first
            let mut order: Vec<usize> = (0..n).filter(|&v| t.dist[v] < INF).collect();
            order.sort_by(|&a, &b| {
                t.dist[a]
                    .total_cmp(&t.dist[b])
                    .then(t.hops[a].cmp(&t.hops[b]))
            });
            let mut wmax = vec![0.0; n];
            for &v in &order {
                if let Some(p) = t.parent[v] {
                    let w = g.weight(p, v).expect("parent edge exists");
                    wmax[v] = f64::max(wmax[p], w);
                }
            }
            let parent = t
                .parent
                .iter()
                .map(|p| p.map_or(NO_PARENT, |p| p as u32))
                .collect();
            (t.dist, wmax, parent)
        })
        .collect();
    let mut idx = ShortestPathIndex {
        n,
        dist: Vec::with_capacity(n * n),
        wmax: Vec::with_capacity(n * n),
        parent: Vec::with_capacity(n * n),
    };
    for (d, w, p) in rows {
        idx.dist.extend(d);
        idx.wmax.extend(w);
        idx.parent.extend(p);
    }
    idx
}

impl ShortestPathIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    /// `W_{u,v}`: heaviest edge on the canonical `u`-`v` path.
    #[inline]
    pub fn w(&self, u: usize, v: usize) -> f64 {
        self.wmax[u * self.n + v]
    }

    #[inline]
    pub fn connected(&self, u: usize, v: usize) -> bool {
        self.dist(u, v) < INF
    }

    /// Predecessor of `v` on the canonical path from `s`.
    pub fn parent(&self, s: usize, v: usize) -> Option<usize> {
        let p = self.parent[s * self.n + v];
        (p != NO_PARENT).then_some(p as usize)
    }

    pub fn dist_matrix(&self) -> &[f64] {
        &self.dist
    }

    /// Vertex sequence of the canonical path from `u` to `v`.
    pub fn path_vertices(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { v: x, n: self.n });
            }
        }
        if !self.connected(u, v) {
            return Err(Error::NoPath { u, v });
        }
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent(u, x) {
            path.push(p);
            x = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Reconstructs `CanonicalPath(u, v)` from the parent arrays.
    pub fn canonical_path(&self, g: &WeightedGraph, u: usize, v: usize) -> Result<CanonicalPath> {
        let vertices = self.path_vertices(u, v)?;
        let mut total = 0.0;
        let mut heaviest: f64 = 0.0;
        for pair in vertices.windows(2) {
            let w = g.weight(pair[0], pair[1]).expect("path edge exists");
            total += w;
            heaviest = heaviest.max(w);
        }
        Ok(CanonicalPath {
            vertices,
            total_weight: total,
            max_edge_weight: heaviest,
        })
    }

    /// Edge indices (into `g.edges()`) along the canonical path.
    pub fn path_edge_ids(&self, g: &WeightedGraph, u: usize, v: usize) -> Result<Vec<usize>> {
        let vertices = self.path_vertices(u, v)?;
        Ok(vertices
            .windows(2)
            .map(|p| g.find(p[0], p[1]).expect("path edge exists").eid)
            .collect())
    }
}
