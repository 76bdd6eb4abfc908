//! Exact stretch certification by all-pairs shortest paths.
//!
//! Distances in the candidate `h` come from one Dijkstra per source; the
//! reference distances and `W_{u,v}` come from the canonical
//! [`ShortestPathIndex`] of `g`. Comparisons allow a relative slack of
//! [`REL_TOL`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::greedy::poly_factor;
use crate::par::prelude::*;
use crate::paths::{build_index, sssp_canonical, sssp_distances, ShortestPathIndex, INF};

pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundKind {
    /// `d_H <= d_G + c * W_{u,v}`.
    AdditiveW { c: f64 },
    /// `d_H <= d_G + c * W_max`.
    AdditiveWmax { c: f64, w_max: f64 },
    /// `d_H <= alpha * d_G`.
    Multiplicative { alpha: f64 },
    /// `d_H >= d_G`.
    NonContracting,
    /// `d_H == d_G`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Stretch,
    /// Connected in `g` but not in `h`.
    Unreachable,
    Contraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub d_g: f64,
    pub d_h: f64,
    pub w: f64,
    /// `d_H - d_G`.
    pub slack: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub bound: BoundKind,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    /// Largest `(d_H - d_G) / W_{u,v}` over checked pairs reachable in `h`.
    pub max_slack_ratio: f64,
    pub size: usize,
}

impl StretchReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which pairs a bound is claimed for.
#[derive(Debug, Clone, Copy)]
pub enum PairClass<'a> {
    All,
    Subset(&'a [usize]),
}

fn check_same_vertices(g_n: usize, h: &WeightedGraph) -> Result<()> {
    if g_n != h.n() {
        return Err(Error::VertexSetMismatch {
            expected: g_n,
            found: h.n(),
        });
    }
    Ok(())
}

#[derive(Default)]
struct Partial {
    pairs: usize,
    violations: Vec<Violation>,
    max_ratio: f64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.pairs += other.pairs;
        self.violations.extend(other.violations);
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        self
    }
}

/// Runs `judge(d_g, d_h, w)` on every unordered pair of `members` that is
/// connected in `g` (or on every pair if `include_disconnected`).
fn scan_pairs(
    idx: &ShortestPathIndex,
    h: &WeightedGraph,
    members: &[usize],
    include_disconnected: bool,
    judge: impl Fn(f64, f64, f64) -> Option<ViolationKind> + Sync,
) -> Partial {
    let n = idx.n();
    let mut in_class = vec![false; n];
    for &v in members {
        in_class[v] = true;
    }
    let sources: Vec<usize> = (0..n).filter(|&v| in_class[v]).collect();
    let partials: Vec<Partial> = crate::slice_iter!(sources)
        .map(|&u| {
            let dh = sssp_distances(h, u);
            let mut p = Partial::default();
            for v in u + 1..n {
                if !in_class[v] {
                    continue;
                }
                let d_g = idx.dist(u, v);
                if d_g == INF && !include_disconnected {
                    continue;
                }
                p.pairs += 1;
                let w = idx.w(u, v);
                let d_h = dh[v];
                if d_h < INF && d_g < INF && w > 0.0 {
                    p.max_ratio = p.max_ratio.max((d_h - d_g) / w);
                }
                if let Some(kind) = judge(d_g, d_h, w) {
                    p.violations.push(Violation {
                        u,
                        v,
                        d_g,
                        d_h,
                        w,
                        slack: d_h - d_g,
                        kind,
                    });
                }
            }
            p
        })
        .collect();
    partials
        .into_iter()
        .fold(Partial::default(), Partial::merge)
}

fn members(n: usize, class: PairClass<'_>) -> Result<Vec<usize>> {
    match class {
        PairClass::All => Ok((0..n).collect()),
        PairClass::Subset(s) => {
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { v, n });
            }
            Ok(s.to_vec())
        }
    }
}

fn upper_bound_judge(limit: impl Fn(f64, f64) -> f64) -> impl Fn(f64, f64, f64) -> Option<ViolationKind> {
    move |d_g, d_h, w| {
        if d_h == INF {
            Some(ViolationKind::Unreachable)
        } else if d_h > limit(d_g, w) * (1.0 + REL_TOL) {
            Some(ViolationKind::Stretch)
        } else {
            None
        }
    }
}

/// Checks `d_H <= d_G + c(n) * W_{u,v}` for every connected pair of the
/// class.
pub fn verify_additive_w(
    g: &WeightedGraph,
    h: &WeightedGraph,
    c_of_n: impl Fn(usize) -> f64,
    class: PairClass<'_>,
) -> Result<StretchReport> {
    check_same_vertices(g.n(), h)?;
    verify_additive_w_indexed(&build_index(g), h, c_of_n(g.n()), class)
}

pub fn verify_additive_w_indexed(
    idx: &ShortestPathIndex,
    h: &WeightedGraph,
    c: f64,
    class: PairClass<'_>,
) -> Result<StretchReport> {
    check_same_vertices(idx.n(), h)?;
    let members = members(idx.n(), class)?;
    let p = scan_pairs(idx, h, &members, false, upper_bound_judge(|d, w| d + c * w));
    Ok(StretchReport {
        bound: BoundKind::AdditiveW { c },
        pairs_checked: p.pairs,
        violations: p.violations,
        max_slack_ratio: p.max_ratio,
        size: h.m(),
    })
}

/// Checks `d_H <= d_G + c * W_max` with the heaviest edge of `g`.
pub fn verify_additive_wmax(g: &WeightedGraph, h: &WeightedGraph, c: f64) -> Result<StretchReport> {
    check_same_vertices(g.n(), h)?;
    let idx = build_index(g);
    let w_max = g.max_weight().unwrap_or(0.0);
    let all: Vec<usize> = (0..g.n()).collect();
    let p = scan_pairs(&idx, h, &all, false, upper_bound_judge(|d, _| d + c * w_max));
    Ok(StretchReport {
        bound: BoundKind::AdditiveWmax { c, w_max },
        pairs_checked: p.pairs,
        violations: p.violations,
        max_slack_ratio: p.max_ratio,
        size: h.m(),
    })
}

pub fn verify_multiplicative(g: &WeightedGraph, h: &WeightedGraph, alpha: f64) -> Result<StretchReport> {
    check_same_vertices(g.n(), h)?;
    verify_multiplicative_indexed(&build_index(g), h, alpha)
}

pub fn verify_multiplicative_indexed(
    idx: &ShortestPathIndex,
    h: &WeightedGraph,
    alpha: f64,
) -> Result<StretchReport> {
    check_same_vertices(idx.n(), h)?;
    let all: Vec<usize> = (0..idx.n()).collect();
    let p = scan_pairs(idx, h, &all, false, upper_bound_judge(|d, _| alpha * d));
    Ok(StretchReport {
        bound: BoundKind::Multiplicative { alpha },
        pairs_checked: p.pairs,
        violations: p.violations,
        max_slack_ratio: p.max_ratio,
        size: h.m(),
    })
}

/// Checks `d_H == d_G` (within tolerance) on every connected pair.
pub fn verify_exact(g: &WeightedGraph, h: &WeightedGraph) -> Result<StretchReport> {
    check_same_vertices(g.n(), h)?;
    let idx = build_index(g);
    let all: Vec<usize> = (0..g.n()).collect();
    let p = scan_pairs(&idx, h, &all, false, |d_g, d_h, _| {
        if d_h == INF {
            Some(ViolationKind::Unreachable)
        } else if d_h > d_g * (1.0 + REL_TOL) {
            Some(ViolationKind::Stretch)
        } else if d_h < d_g * (1.0 - REL_TOL) {
            Some(ViolationKind::Contraction)
        } else {
            None
        }
    });
    Ok(StretchReport {
        bound: BoundKind::Exact,
        pairs_checked: p.pairs,
        violations: p.violations,
        max_slack_ratio: p.max_ratio,
        size: h.m(),
    })
}

/// True iff every edge of `h` is an edge of `g` with the same weight.
pub fn verify_subgraph(g: &WeightedGraph, h: &WeightedGraph) -> bool {
    h.n() == g.n()
        && h
            .edges()
            .iter()
            .all(|e| g.weight(e.u, e.v) == Some(e.w))
}

/// Checks `d_H >= d_G` on every pair, including pairs disconnected in `g`
/// (which must stay disconnected in `h`).
pub fn verify_non_contracting(g: &WeightedGraph, h: &WeightedGraph) -> Result<StretchReport> {
    check_same_vertices(g.n(), h)?;
    verify_non_contracting_indexed(&build_index(g), h)
}

pub fn verify_non_contracting_indexed(
    idx: &ShortestPathIndex,
    h: &WeightedGraph,
) -> Result<StretchReport> {
    check_same_vertices(idx.n(), h)?;
    let all: Vec<usize> = (0..idx.n()).collect();
    let p = scan_pairs(idx, h, &all, true, |d_g, d_h, _| {
        let contracted = if d_g == INF {
            d_h < INF
        } else {
            d_h < d_g - REL_TOL * d_g
        };
        contracted.then_some(ViolationKind::Contraction)
    });
    Ok(StretchReport {
        bound: BoundKind::NonContracting,
        pairs_checked: p.pairs,
        violations: p.violations,
        max_slack_ratio: p.max_ratio,
        size: h.m(),
    })
}

/// Least-squares slope of `ln(size)` against `ln(n)`.
pub fn size_scaling_fit(records: &[(usize, f64)]) -> Result<f64> {
    let mut distinct: Vec<usize> = records.iter().map(|r| r.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFewPoints(distinct.len()));
    }
    if let Some(r) = records.iter().find(|r| r.0 == 0 || r.1.is_nan() || r.1 <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot take logarithms of record ({}, {})",
            r.0, r.1
        )));
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|&(n, y)| ((n as f64).ln(), y.ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Row-major matrix of the smallest heaviest-edge weight over all shortest
/// paths (not just the canonical one). Exhaustive over the shortest-path
/// DAG; meant for small graphs.
pub fn minimax_shortest_path_w(g: &WeightedGraph) -> Vec<f64> {
    let n = g.n();
    let mut out = vec![0.0f64; n * n];
    for s in 0..n {
        let t = sssp_canonical(g, s);
        let mut order: Vec<usize> = (0..n).filter(|&v| t.dist[v] < INF).collect();
        order.sort_by(|&a, &b| t.dist[a].total_cmp(&t.dist[b]));
        let row = &mut out[s * n..(s + 1) * n];
        for &v in &order {
            if v == s {
                continue;
            }
            let mut best = INF;
            for a in g.neighbors(v) {
                let p = a.to;
                let on_dag = t.dist[p] < t.dist[v]
                    && (t.dist[p] + a.w - t.dist[v]).abs() <= REL_TOL * t.dist[v];
                if on_dag {
                    best = best.min(row[p].max(a.w));
                }
            }
            row[v] = best;
        }
    }
    out
}

/// How far canonical `W_{u,v}` sits above the minimax over all shortest
/// paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalWGap {
    pub pairs: usize,
    pub pairs_with_gap: usize,
    pub max_ratio: f64,
}

pub fn canonical_w_gap(g: &WeightedGraph, idx: &ShortestPathIndex) -> CanonicalWGap {
    let n = g.n();
    let mm = minimax_shortest_path_w(g);
    let mut gap = CanonicalWGap {
        pairs: 0,
        pairs_with_gap: 0,
        max_ratio: 1.0,
    };
    for u in 0..n {
        for v in u + 1..n {
            if !idx.connected(u, v) {
                continue;
            }
            gap.pairs += 1;
            let (canon, best) = (idx.w(u, v), mm[u * n + v]);
            if canon > best {
                gap.pairs_with_gap += 1;
                gap.max_ratio = gap.max_ratio.max(canon / best);
            }
        }
    }
    gap
}

/// A stretch claim that can be checked against an input graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    SixW { eps: f64 },
    TwoW,
    FourWEmulator,
    Poly { eps: f64, c: f64 },
    Mult { alpha: f64 },
    Subset { eps: f64, subset: Vec<usize> },
}

/// Outcome of [`Bound::certify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `None` for emulators, which need not be subgraphs.
    pub subgraph: Option<bool>,
    pub reports: Vec<StretchReport>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.subgraph != Some(false) && self.reports.iter().all(StretchReport::passed)
    }

    pub fn max_slack_ratio(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.max_slack_ratio)
            .fold(0.0, f64::max)
    }

    pub fn violation_count(&self) -> usize {
        self.reports.iter().map(|r| r.violations.len()).sum()
    }
}

impl Bound {
    /// The additive factor on `W_{u,v}` for an `n`-vertex input, if any.
    pub fn additive_factor(&self, n: usize) -> Option<f64> {
        match self {
            Bound::SixW { eps } => Some(6.0 + eps),
            Bound::TwoW => Some(2.0),
            Bound::FourWEmulator => Some(4.0),
            Bound::Poly { eps, c } => Some(poly_factor(n, *eps, *c)),
            Bound::Subset { eps, .. } => Some(2.0 + eps),
            Bound::Mult { .. } => None,
        }
    }

    pub fn certify(&self, g: &WeightedGraph, h: &WeightedGraph) -> Result<Certificate> {
        check_same_vertices(g.n(), h)?;
        self.certify_indexed(g, &build_index(g), h)
    }

    pub fn certify_indexed(
        &self,
        g: &WeightedGraph,
        idx: &ShortestPathIndex,
        h: &WeightedGraph,
    ) -> Result<Certificate> {
        let n = g.n();
        let mut reports = Vec::new();
        let subgraph = match self {
            Bound::FourWEmulator => {
                reports.push(verify_non_contracting_indexed(idx, h)?);
                None
            }
            _ => Some(verify_subgraph(g, h)),
        };
        let report = match self {
            Bound::Mult { alpha } => verify_multiplicative_indexed(idx, h, *alpha)?,
            Bound::Subset { subset, .. } => verify_additive_w_indexed(
                idx,
                h,
                self.additive_factor(n).expect("additive"),
                PairClass::Subset(subset),
            )?,
            _ => verify_additive_w_indexed(
                idx,
                h,
                self.additive_factor(n).expect("additive"),
                PairClass::All,
            )?,
        };
        reports.push(report);
        Ok(Certificate { subgraph, reports })
    }

    /// Parses `6w:EPS`, `2w`, `4w-emu`, `poly:EPS:C`, `mult:ALPHA`. The
    /// subset form `subset:EPS:FILE` needs the vertex list from the caller,
    /// see [`Bound::parse_with_subset`].
    pub fn parse(s: &str) -> Result<Bound> {
        Bound::parse_with_subset(s, |_| {
            Err(Error::InvalidParameter("subset bound needs a subset file".into()))
        })
    }

    pub fn parse_with_subset(
        s: &str,
        load: impl FnOnce(&str) -> Result<Vec<usize>>,
    ) -> Result<Bound> {
        let bad = || Error::InvalidParameter(format!("unrecognized bound `{s}`"));
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.splitn(3, ':').collect();
        Ok(match parts.as_slice() {
            ["6w", eps] => Bound::SixW { eps: num(eps)? },
            ["2w"] => Bound::TwoW,
            ["4w-emu"] => Bound::FourWEmulator,
            ["poly", eps, c] => Bound::Poly {
                eps: num(eps)?,
                c: num(c)?,
            },
            ["mult", alpha] => Bound::Mult { alpha: num(alpha)? },
            ["subset", eps, file] => Bound::Subset {
                eps: num(eps)?,
                subset: load(file)?,
            },
            _ => return Err(bad()),
        })
    }
}
