//! Deterministic greedy constructions: the multiplicative greedy spanner and
//! the path-buying additive spanners (+(6+eps)W, subsetwise +(2+eps)W and
//! the linear-size polynomial-stretch spanner).
//!
//! The path-buying spanners share one loop: seed `H` with a light
//! initialization, scan vertex pairs in a fixed order, and add the canonical
//! `u`-`v` path of `G` whenever `d_H(u, v)` exceeds `d_G(u, v) + f * W_{u,v}`
//! at the moment the pair is considered. `H` only grows, so the final spanner
//! satisfies the bound for every scanned pair.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeSelection, WeightedGraph};
use crate::light::{ceil_pow, t_light_init};
use crate::par::prelude::*;
use crate::paths::{apsp_distances, build_index, AdjList, DijkstraScratch, ShortestPathIndex};

/// Construction parameters recorded with every result.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub algo: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_size: Option<usize>,
}

impl Params {
    pub fn named(algo: &str) -> Self {
        Params {
            algo: algo.to_string(),
            ..Params::default()
        }
    }
}

/// Number of edges a construction phase added to `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCount {
    pub phase: String,
    pub edges: usize,
}

/// Per-level sizes of the randomized +2W construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub v_i: usize,
    pub d_i: usize,
    pub e_i: usize,
    pub missing_pivots: usize,
}

/// A subgraph of the input together with how it was built.
#[derive(Debug, Clone)]
pub struct SpannerResult {
    pub graph: WeightedGraph,
    pub params: Params,
    /// Pairs whose canonical paths were bought, in scan order.
    pub paths_added: Vec<(usize, usize)>,
    pub phases: Vec<PhaseCount>,
    /// Filled by the +2W construction only.
    pub levels: Vec<LevelStats>,
}

impl SpannerResult {
    pub fn size(&self) -> usize {
        self.graph.m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderMode {
    /// By `W_{u,v}`, then `d_G(u,v)`.
    WThenDist,
    /// By `W_{u,v}` only.
    WOnly,
}

/// Pairs in scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrder {
    pub pairs: Vec<(usize, usize)>,
}

/// Sorts unordered pairs by `W` (and `d_G` in [`OrderMode::WThenDist`]),
/// breaking remaining ties by `(min id, max id)`. Self-pairs and duplicates
/// are dropped; disconnected pairs go last.
pub fn make_pair_order(
    idx: &ShortestPathIndex,
    pairs: impl IntoIterator<Item = (usize, usize)>,
    mode: OrderMode,
) -> PairOrder {
    let set: BTreeSet<(usize, usize)> = pairs
        .into_iter()
        .filter(|(u, v)| u != v)
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    let mut pairs: Vec<_> = set.into_iter().collect();
    pairs.sort_by(|&(a, b), &(c, d)| {
        let ka = !idx.connected(a, b);
        let kc = !idx.connected(c, d);
        let mut ord = ka
            .cmp(&kc)
            .then(idx.w(a, b).total_cmp(&idx.w(c, d)));
        if mode == OrderMode::WThenDist {
            ord = ord.then(idx.dist(a, b).total_cmp(&idx.dist(c, d)));
        }
        ord.then((a, b).cmp(&(c, d)))
    });
    PairOrder { pairs }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// How `d_H(u, v)` is evaluated during the pair scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanStrategy {
    /// Keep the full distance matrix of `H` and update it on every edge
    /// insertion.
    #[default]
    Incremental,
    /// Fresh Dijkstra in the current `H` per pair, stopping once the target
    /// is settled or the trigger threshold is passed.
    Dijkstra,
}

trait HDistances {
    fn exceeds(&mut self, u: usize, v: usize, threshold: f64) -> bool;
    fn insert(&mut self, u: usize, v: usize, w: f64);
}

/// Distance matrix of a growing graph.
struct IncrementalApsp {
    n: usize,
    d: Vec<f64>,
}

impl IncrementalApsp {
    fn new(h: &WeightedGraph) -> Self {
        IncrementalApsp {
            n: h.n(),
            d: apsp_distances(h),
        }
    }
}

impl HDistances for IncrementalApsp {
    fn exceeds(&mut self, u: usize, v: usize, threshold: f64) -> bool {
        self.d[u * self.n + v] > threshold
    }

    fn insert(&mut self, a: usize, b: usize, w: f64) {
        let n = self.n;
        if self.d[a * n + b] <= w {
            return;
        }
        // a new shortest path uses the new edge at most once
        let row_a = self.d[a * n..(a + 1) * n].to_vec();
        let row_b = self.d[b * n..(b + 1) * n].to_vec();
        crate::chunks_mut!(self.d, n)
            .enumerate()
            .for_each(|(x, row)| {
                let via_a = row_a[x] + w;
                let via_b = row_b[x] + w;
                let use_a = via_a < row_b[x];
                let use_b = via_b < row_a[x];
                if !use_a && !use_b {
                    return;
                }
                for y in 0..n {
                    let mut best = row[y];
                    if use_a {
                        best = best.min(via_a + row_b[y]);
                    }
                    if use_b {
                        best = best.min(via_b + row_a[y]);
                    }
                    row[y] = best;
                }
            });
    }
}

struct OnDemand {
    adj: AdjList,
    scratch: DijkstraScratch,
}

impl HDistances for OnDemand {
    fn exceeds(&mut self, u: usize, v: usize, threshold: f64) -> bool {
        self.scratch.distance_within(&self.adj, u, v, threshold) > threshold
    }

    fn insert(&mut self, u: usize, v: usize, w: f64) {
        self.adj.add_edge(u, v, w);
    }
}

/// Scans `order` and buys canonical paths where `d_H > d_G + factor * W`.
fn buy_paths(
    g: &WeightedGraph,
    idx: &ShortestPathIndex,
    sel: &mut EdgeSelection<'_>,
    order: &PairOrder,
    factor: f64,
    strategy: ScanStrategy,
) -> Vec<(usize, usize)> {
    let h = sel.to_graph();
    let mut dist: Box<dyn HDistances> = match strategy {
        ScanStrategy::Incremental => Box::new(IncrementalApsp::new(&h)),
        ScanStrategy::Dijkstra => Box::new(OnDemand {
            adj: AdjList::from_graph(&h),
            scratch: DijkstraScratch::new(g.n()),
        }),
    };
    let mut bought = Vec::new();
    for &(u, v) in &order.pairs {
        if !idx.connected(u, v) {
            continue;
        }
        let threshold = idx.dist(u, v) + factor * idx.w(u, v);
        if !dist.exceeds(u, v, threshold) {
            continue;
        }
        let eids = idx.path_edge_ids(g, u, v).expect("connected pair has a path");
        for eid in eids {
            if sel.insert(eid) {
                let e = g.edges()[eid];
                dist.insert(e.u, e.v, e.w);
            }
        }
        bought.push((u, v));
    }
    bought
}

fn check_eps_positive(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("eps must be positive, got {eps}")))
    }
}

/// Greedy `(2k-1)`-spanner: edges by nondecreasing weight, kept when the
/// current spanner distance exceeds `(2k-1) * w`.
pub fn greedy_multiplicative(g: &WeightedGraph, k: usize) -> Result<SpannerResult> {
    if k == 0 {
        return Err(invalid("multiplicative spanner needs k >= 1"));
    }
    let keep = greedy_stretch_mask(g, (2 * k - 1) as f64);
    let graph = g.edge_subgraph(&keep);
    let m = graph.m();
    Ok(SpannerResult {
        graph,
        params: Params {
            k: Some(k),
            ..Params::named("mult")
        },
        paths_added: Vec::new(),
        phases: vec![PhaseCount {
            phase: "greedy".into(),
            edges: m,
        }],
        levels: Vec::new(),
    })
}

fn greedy_stretch_mask(g: &WeightedGraph, stretch: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..g.m()).collect();
    let edges = g.edges();
    order.sort_by(|&a, &b| {
        edges[a]
            .w
            .total_cmp(&edges[b].w)
            .then(edges[a].key().cmp(&edges[b].key()))
    });
    let mut adj = AdjList::new(g.n());
    let mut scratch = DijkstraScratch::new(g.n());
    let mut keep = vec![false; g.m()];
    for eid in order {
        let e = edges[eid];
        let bound = stretch * e.w;
        if scratch.distance_within(&adj, e.u, e.v, bound) > bound {
            adj.add_edge(e.u, e.v, e.w);
            keep[eid] = true;
        }
    }
    keep
}

/// +(6+eps)W spanner with `ceil(n^{1/3})`-light initialization.
pub fn build_6eps_spanner(g: &WeightedGraph, eps: f64) -> Result<SpannerResult> {
    check_eps_positive(eps)?;
    build_6eps_spanner_indexed(g, &build_index(g), eps, ScanStrategy::default())
}

pub fn build_6eps_spanner_indexed(
    g: &WeightedGraph,
    idx: &ShortestPathIndex,
    eps: f64,
    strategy: ScanStrategy,
) -> Result<SpannerResult> {
    check_eps_positive(eps)?;
    let n = g.n();
    let t = ceil_pow(n, 1.0 / 3.0);
    let mut sel = EdgeSelection::new(g);
    t_light_init(g, t)?.apply(&mut sel);
    let init = sel.len();
    let order = make_pair_order(idx, all_pairs(n), OrderMode::WThenDist);
    let bought = buy_paths(g, idx, &mut sel, &order, 6.0 + eps, strategy);
    Ok(SpannerResult {
        phases: vec![
            PhaseCount {
                phase: "light_init".into(),
                edges: init,
            },
            PhaseCount {
                phase: "paths".into(),
                edges: sel.len() - init,
            },
        ],
        graph: sel.to_graph(),
        params: Params {
            eps: Some(eps),
            t: Some(t),
            ..Params::named("6w")
        },
        paths_added: bought,
        levels: Vec::new(),
    })
}

fn check_subset(g: &WeightedGraph, subset: &[usize]) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(invalid("subset S must be nonempty"));
    }
    if let Some(&v) = subset.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { v, n: g.n() });
    }
    let s: BTreeSet<usize> = subset.iter().copied().collect();
    Ok(s.into_iter().collect())
}

/// Subsetwise +(2+eps)W spanner for pairs in `S x S`, with
/// `ceil(sqrt|S|)`-light initialization.
pub fn build_subsetwise_spanner(
    g: &WeightedGraph,
    subset: &[usize],
    eps: f64,
) -> Result<SpannerResult> {
    check_eps_positive(eps)?;
    check_subset(g, subset)?;
    build_subsetwise_spanner_indexed(g, &build_index(g), subset, eps, ScanStrategy::default())
}

pub fn build_subsetwise_spanner_indexed(
    g: &WeightedGraph,
    idx: &ShortestPathIndex,
    subset: &[usize],
    eps: f64,
    strategy: ScanStrategy,
) -> Result<SpannerResult> {
    check_eps_positive(eps)?;
    let s = check_subset(g, subset)?;
    let t = ceil_pow(s.len(), 0.5);
    let mut sel = EdgeSelection::new(g);
    t_light_init(g, t)?.apply(&mut sel);
    let init = sel.len();
    let pairs = s
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| s[i + 1..].iter().map(move |&v| (u, v)));
    let order = make_pair_order(idx, pairs, OrderMode::WOnly);
    let bought = buy_paths(g, idx, &mut sel, &order, 2.0 + eps, strategy);
    Ok(SpannerResult {
        phases: vec![
            PhaseCount {
                phase: "light_init".into(),
                edges: init,
            },
            PhaseCount {
                phase: "paths".into(),
                edges: sel.len() - init,
            },
        ],
        graph: sel.to_graph(),
        params: Params {
            eps: Some(eps),
            t: Some(t),
            subset_size: Some(s.len()),
            ..Params::named("subsetwise")
        },
        paths_added: bought,
        levels: Vec::new(),
    })
}

/// Odd multiplicative stretch used by the linear-size spanner: the smallest
/// odd integer `>= log2 n` (at least 1).
pub fn poly_mult_stretch(n: usize) -> usize {
    let l = (n.max(2) as f64).log2().ceil() as usize;
    if l.is_multiple_of(2) {
        l + 1
    } else {
        l
    }
}

/// Additive factor `c * n^{(1-eps)/2} * log2 n` of the linear-size spanner.
pub fn poly_factor(n: usize, eps: f64, c: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    c * nf.powf((1.0 - eps) / 2.0) * nf.log2()
}

/// Linear-size spanner: `ceil(n^eps)`-light initialization, plus a greedy
/// multiplicative spanner of stretch about `log2 n`, plus bought paths.
pub fn build_poly_spanner(g: &WeightedGraph, eps: f64, c: f64) -> Result<SpannerResult> {
    check_poly_params(eps, c)?;
    build_poly_spanner_indexed(g, &build_index(g), eps, c, ScanStrategy::default())
}

fn check_poly_params(eps: f64, c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid(format!("eps must lie in [0, 1], got {eps}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    Ok(())
}

pub fn build_poly_spanner_indexed(
    g: &WeightedGraph,
    idx: &ShortestPathIndex,
    eps: f64,
    c: f64,
    strategy: ScanStrategy,
) -> Result<SpannerResult> {
    check_poly_params(eps, c)?;
    let n = g.n();
    let t = ceil_pow(n, eps);
    let stretch = poly_mult_stretch(n);
    let mut sel = EdgeSelection::new(g);
    t_light_init(g, t)?.apply(&mut sel);
    let init = sel.len();
    for (eid, k) in greedy_stretch_mask(g, stretch as f64).into_iter().enumerate() {
        if k {
            sel.insert(eid);
        }
    }
    let mult = sel.len() - init;
    let order = make_pair_order(idx, all_pairs(n), OrderMode::WOnly);
    let bought = buy_paths(g, idx, &mut sel, &order, poly_factor(n, eps, c), strategy);
    Ok(SpannerResult {
        phases: vec![
            PhaseCount {
                phase: "light_init".into(),
                edges: init,
            },
            PhaseCount {
                phase: "multiplicative".into(),
                edges: mult,
            },
            PhaseCount {
                phase: "paths".into(),
                edges: sel.len() - init - mult,
            },
        ],
        graph: sel.to_graph(),
        params: Params {
            eps: Some(eps),
            c: Some(c),
            t: Some(t),
            k: Some(stretch.div_ceil(2)),
            ..Params::named("poly")
        },
        paths_added: bought,
        levels: Vec::new(),
    })
}
