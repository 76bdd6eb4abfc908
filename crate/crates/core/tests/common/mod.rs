#![allow(dead_code)]

use wspanner::generate::{generate, sqrt_degree_p, Family, GenSpec, WeightModel};
use wspanner::WeightedGraph;

pub const MODELS: [WeightModel; 3] = [WeightModel::Unit, WeightModel::Uniform, WeightModel::ExpSpread];

/// Mixed gnp/grid/geometric corpus with `n` in `[20, 300]`: 6 sizes, 3
/// families, 3 weight models.
pub fn mixed_corpus() -> Vec<(String, WeightedGraph)> {
    let mut out = Vec::new();
    let mut seed = 100;
    for n in [20usize, 45, 90, 150, 220, 300] {
        for family in [Family::Gnp, Family::Grid, Family::Geometric] {
            for model in MODELS {
                seed += 1;
                let spec = GenSpec::new(family, n, model, seed);
                let g = generate(&spec).unwrap();
                out.push((format!("{family:?}/{model:?}/n={n}/seed={seed}"), g));
            }
        }
    }
    out
}

/// Small graphs (n <= 12) from every family and weight model.
pub fn small_corpus() -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    let mut seed = 0;
    for n in 2..=12 {
        for family in [
            Family::Gnp,
            Family::Grid,
            Family::Geometric,
            Family::Star,
            Family::Path,
            Family::Complete,
            Family::Tree,
        ] {
            for model in MODELS {
                seed += 1;
                let mut spec = GenSpec::new(family, n, model, seed);
                if family == Family::Gnp {
                    spec = spec.with_p(0.45);
                }
                if family == Family::Geometric {
                    spec = spec.with_radius(0.6);
                }
                out.push(generate(&spec).unwrap());
            }
        }
    }
    out
}

pub fn gnp_sqrt(n: usize, model: WeightModel, seed: u64) -> WeightedGraph {
    generate(&GenSpec::new(Family::Gnp, n, model, seed).with_p(sqrt_degree_p(n))).unwrap()
}

/// Cubic-time APSP, row-major, independent of the Dijkstra code.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<f64> {
    let n = g.n();
    let mut d = vec![f64::INFINITY; n * n];
    for v in 0..n {
        d[v * n + v] = 0.0;
    }
    for e in g.edges() {
        d[e.u * n + e.v] = e.w;
        d[e.v * n + e.u] = e.w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Tie-break key of a vertex sequence, recomputed from scratch.
pub fn path_key(g: &WeightedGraph, p: &[usize]) -> (f64, usize, u128, u128) {
    let mut key = (0.0, 0, 0u128, 0u128);
    for w in p.windows(2) {
        let (lo, hi) = (w[0].min(w[1]), w[0].max(w[1]));
        let tag = ((lo as u64) << 32) | hi as u64;
        key.0 += g.weight(w[0], w[1]).unwrap();
        key.1 += 1;
        key.2 += tag as u128;
        key.3 += splitmix64(tag) as u128;
    }
    key
}

/// Every simple path from `s` to `t` (exponential; tiny graphs only).
pub fn all_simple_paths(g: &WeightedGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(g: &WeightedGraph, t: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let x = *path.last().unwrap();
        if x == t {
            out.push(path.clone());
            return;
        }
        for a in g.neighbors(x) {
            if !on[a.to] {
                on[a.to] = true;
                path.push(a.to);
                go(g, t, path, on, out);
                path.pop();
                on[a.to] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[s] = true;
    let mut out = Vec::new();
    go(g, t, &mut vec![s], &mut on, &mut out);
    out
}

/// The minimum-key simple path by exhaustive enumeration.
pub fn brute_canonical(g: &WeightedGraph, s: usize, t: usize) -> Option<Vec<usize>> {
    all_simple_paths(g, s, t).into_iter().min_by(|a, b| {
        let (ka, kb) = (path_key(g, a), path_key(g, b));
        ka.0.total_cmp(&kb.0)
            .then(ka.1.cmp(&kb.1))
            .then(ka.2.cmp(&kb.2))
            .then(ka.3.cmp(&kb.3))
    })
}

/// Shared vertices form one contiguous run in both paths.
pub fn single_intersection(p: &[usize], q: &[usize]) -> bool {
    let shared: Vec<usize> = p.iter().copied().filter(|x| q.contains(x)).collect();
    if shared.is_empty() {
        return true;
    }
    let pos = |path: &[usize], x: usize| path.iter().position(|&y| y == x).unwrap();
    let contiguous = |path: &[usize]| {
        let idx: Vec<usize> = shared.iter().map(|&x| pos(path, x)).collect();
        let (lo, hi) = (*idx.iter().min().unwrap(), *idx.iter().max().unwrap());
        hi - lo + 1 == shared.len()
    };
    contiguous(p) && contiguous(q)
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}
