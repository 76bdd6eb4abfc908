//! Undirected graphs with strictly positive edge weights.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, w }
    }

    pub fn key(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Adjacency entry: neighbor, weight and the index of the edge in
/// [`WeightedGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adj {
    pub to: usize,
    pub w: f64,
    pub eid: usize,
}

/// Simple undirected graph on vertices `0..n`.
///
/// Edges keep their insertion order; adjacency lists are sorted by neighbor
/// id so that lookups are a binary search and iteration is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Adj>>,
}

impl WeightedGraph {
    /// Builds a graph, rejecting self-loops, parallel edges, out-of-range
    /// endpoints and weights that are not finite and strictly positive.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut g = WeightedGraph::empty(n);
        let mut seen = HashSet::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { v: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::BadWeight { u: a, v: b, w });
            }
            let e = Edge::new(a, b, w);
            if !seen.insert(e.key()) {
                return Err(Error::DuplicateEdge { u: e.u, v: e.v });
            }
            g.edges.push(e);
        }
        g.rebuild_adjacency();
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Subgraph of `self` keeping the edges whose index is flagged in `keep`.
    pub fn edge_subgraph(&self, keep: &[bool]) -> WeightedGraph {
        let mut g = WeightedGraph::empty(self.n);
        g.edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        g.rebuild_adjacency();
        g
    }

    fn rebuild_adjacency(&mut self) {
        let mut adj = vec![Vec::new(); self.n];
        for (eid, e) in self.edges.iter().enumerate() {
            adj[e.u].push(Adj { to: e.v, w: e.w, eid });
            adj[e.v].push(Adj { to: e.u, w: e.w, eid });
        }
        for list in &mut adj {
            list.sort_by_key(|a| a.to);
        }
        self.adj = adj;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[Adj] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Adjacency entry for `{u, v}`, if the edge exists.
    pub fn find(&self, u: usize, v: usize) -> Option<&Adj> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |a| a.to)
            .ok()
            .map(|i| &list[i])
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.find(u, v).map(|a| a.w)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.find(u, v).is_some()
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.w).reduce(f64::min)
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.w).reduce(f64::max)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Component label per vertex, labels numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for a in &self.adj[x] {
                    if label[a.to] == usize::MAX {
                        label[a.to] = next;
                        stack.push(a.to);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Induced subgraph on the largest connected component, vertices
    /// relabelled in increasing order of their old ids.
    pub fn largest_component(&self) -> WeightedGraph {
        let label = self.components();
        let count = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        // first component of maximum size
        let Some(best) = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))) else {
            return self.clone();
        };
        let mut remap = vec![usize::MAX; self.n];
        let mut k = 0;
        for v in 0..self.n {
            if label[v] == best {
                remap[v] = k;
                k += 1;
            }
        }
        let mut g = WeightedGraph::empty(k);
        g.edges = self
            .edges
            .iter()
            .filter(|e| label[e.u] == best)
            .map(|e| Edge::new(remap[e.u], remap[e.v], e.w))
            .collect();
        g.rebuild_adjacency();
        g
    }
}

/// Divides every weight by the minimum weight, so the lightest edge has
/// weight exactly 1.
pub fn normalize_weights(g: &WeightedGraph) -> Result<WeightedGraph> {
    let min = g.min_weight().ok_or(Error::NoEdges)?;
    if let Some(e) = g.edges.iter().find(|e| !(e.w.is_finite() && e.w > 0.0)) {
        return Err(Error::BadWeight { u: e.u, v: e.v, w: e.w });
    }
    let mut out = g.clone();
    for e in &mut out.edges {
        // exact for the minimum edge itself
        e.w = if e.w == min { 1.0 } else { e.w / min };
    }
    out.rebuild_adjacency();
    Ok(out)
}

/// Mutable edge set over a fixed host graph, used while a spanner grows.
#[derive(Debug, Clone)]
pub struct EdgeSelection<'g> {
    host: &'g WeightedGraph,
    keep: Vec<bool>,
    count: usize,
}

impl<'g> EdgeSelection<'g> {
    pub fn new(host: &'g WeightedGraph) -> Self {
        EdgeSelection {
            host,
            keep: vec![false; host.m()],
            count: 0,
        }
    }

    pub fn host(&self) -> &'g WeightedGraph {
        self.host
    }

    /// Marks edge `eid`; returns true if it was not already present.
    pub fn insert(&mut self, eid: usize) -> bool {
        let fresh = !self.keep[eid];
        if fresh {
            self.keep[eid] = true;
            self.count += 1;
        }
        fresh
    }

    pub fn contains(&self, eid: usize) -> bool {
        self.keep[eid]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn mask(&self) -> &[bool] {
        &self.keep
    }

    pub fn to_graph(&self) -> WeightedGraph {
        self.host.edge_subgraph(&self.keep)
    }
}
