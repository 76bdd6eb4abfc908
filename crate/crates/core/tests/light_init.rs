mod common;

use proptest::prelude::*;
use wspanner::build_index;
use wspanner::generate::{generate, Family, GenSpec, WeightModel};
use wspanner::light::t_light_init;

proptest! {
    #[test]
    fn size_bound_and_monotone(seed in 0u64..500, n in 5usize..60, t in 1usize..8) {
        let g = generate(&GenSpec::new(Family::Gnp, n, WeightModel::Uniform, seed).with_p(0.3)).unwrap();
        let a = t_light_init(&g, t).unwrap();
        let b = t_light_init(&g, t + 1).unwrap();
        prop_assert!(a.kept_count() <= n * t);
        for (x, y) in a.kept_mask().iter().zip(b.kept_mask()) {
            prop_assert!(!x || *y);
        }
        for u in 0..n {
            let sel = a.light_neighbors(u);
            prop_assert_eq!(sel.len(), g.degree(u).min(t));
            let heaviest = sel.iter().map(|s| s.1).fold(0.0, f64::max);
            for adj in g.neighbors(u) {
                if !a.selected_by(u, adj.to) {
                    prop_assert!(adj.w >= heaviest);
                }
            }
            for w in sel.windows(2) {
                prop_assert!((w[0].1, w[0].0) <= (w[1].1, w[1].0));
            }
        }
    }
}

/// For canonical paths missing `l` edges of the initialization, count the
/// vertices with a light neighbor on the path through an edge of weight at
/// most `W_{u,v}`, and compare against `t * l / 8`. The hidden constant is
/// unknown, so misses are only reported.
#[test]
fn light_neighbor_calibration() {
    let mut samples = 0;
    let mut misses = 0;
    for seed in 0..12 {
        let g = generate(&GenSpec::new(Family::Gnp, 60, WeightModel::ExpSpread, seed).with_p(0.25))
            .unwrap();
        let idx = build_index(&g);
        for t in [2, 4] {
            let li = t_light_init(&g, t).unwrap();
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    let Ok(p) = idx.path_vertices(u, v) else { continue };
                    let missing = p
                        .windows(2)
                        .filter(|e| !li.is_t_light_neighbor(e[0], e[1]))
                        .count();
                    if missing == 0 {
                        continue;
                    }
                    let w = idx.w(u, v);
                    let on_path: Vec<bool> = (0..g.n()).map(|x| p.contains(&x)).collect();
                    let count = (0..g.n())
                        .filter(|&x| {
                            g.neighbors(x).iter().any(|a| {
                                on_path[a.to] && a.w <= w && li.is_t_light_neighbor(x, a.to)
                            })
                        })
                        .count();
                    samples += 1;
                    if (count as f64) < (t * missing) as f64 / 8.0 {
                        misses += 1;
                        eprintln!("calibration miss: seed {seed} t {t} pair ({u},{v}) l={missing} |S|={count}");
                    }
                }
            }
        }
    }
    eprintln!("light-neighbor calibration: {misses} misses out of {samples} paths");
    assert!(samples > 0);
}
