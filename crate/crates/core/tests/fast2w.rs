mod common;

use proptest::prelude::*;
use wspanner::fast2w::{build_fast_2w, sample_levels};
use wspanner::generate::{generate, Family, GenSpec, WeightModel};
use wspanner::verify::{verify_additive_w, verify_subgraph, Bound, PairClass};
use wspanner::WeightedGraph;

use common::*;

#[test]
fn first_level_sample_size_matches_expectation() {
    // n = 64, c = 2: s_1 = 32, p_1 = 2 * 6 / 32 = 0.375, E|D_1| = 24
    let g = gnp_sqrt(64, WeightModel::Unit, 1);
    let sizes: Vec<f64> = (0..100)
        .map(|seed| sample_levels(&g, 2.0, seed).unwrap().level(1).sampled.len() as f64)
        .collect();
    let mean = sizes.iter().sum::<f64>() / sizes.len() as f64;
    let sigma = (64.0 * 0.375 * 0.625f64).sqrt() / 10.0;
    assert_eq!(sample_levels(&g, 2.0, 0).unwrap().level(1).probability, 0.375);
    assert!((mean - 24.0).abs() <= 3.0 * sigma, "mean {mean}");
}

#[test]
fn trees_are_returned_whole() {
    for seed in 0..5 {
        let g = generate(&GenSpec::new(Family::Tree, 120, WeightModel::ExpSpread, seed)).unwrap();
        let h = build_fast_2w(&g, 4.0, seed).unwrap();
        assert_eq!(h.graph.edges(), g.edges());
    }
}

#[test]
fn every_four_vertex_graph() {
    // all 64 labelled graphs on 4 vertices, three weightings each
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for mask in 0u32..64 {
        for weights in [[1.0; 6], [1.0, 2.0, 3.0, 4.0, 5.0, 6.0], [4.0, 0.5, 1.0, 8.0, 0.25, 2.0]] {
            let edges = (0..6)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| (pairs[b].0, pairs[b].1, weights[b]));
            let g = WeightedGraph::new(4, edges).unwrap();
            for seed in 0..4 {
                let h = build_fast_2w(&g, 1.0, seed).unwrap();
                assert!(Bound::TwoW.certify(&g, &h.graph).unwrap().passed(), "mask {mask}");
            }
        }
    }
}

#[test]
fn most_seeds_pass_at_n200() {
    let g = gnp_sqrt(200, WeightModel::Uniform, 77);
    let mut pass = 0;
    for seed in 0..20 {
        let h = build_fast_2w(&g, 4.0, seed).unwrap();
        let r = verify_additive_w(&g, &h.graph, |_| 2.0, PairClass::All).unwrap();
        if r.passed() {
            pass += 1;
        } else {
            eprintln!("fast2w seed {seed}: {} violations", r.violations.len());
        }
    }
    assert!(pass >= 19, "{pass}/20");
}

#[test]
fn level_stats_are_consistent() {
    let g = gnp_sqrt(150, WeightModel::ExpSpread, 5);
    let h = build_fast_2w(&g, 4.0, 9).unwrap();
    let k = h.params.k.unwrap();
    assert_eq!(h.levels.len(), k + 1);
    assert_eq!(h.phases.len(), k + 1);
    assert_eq!(h.phases.iter().map(|p| p.edges).sum::<usize>(), h.size());
    for w in h.levels.windows(2) {
        assert!(w[1].e_i <= w[0].e_i || w[0].level == 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn output_is_subgraph_and_levels_nest(n in 4usize..80, seed in 0u64..1000, p in 0.05f64..0.7, m in 0usize..3) {
        let g = generate(&GenSpec::new(Family::Gnp, n, MODELS[m], seed).with_p(p)).unwrap();
        let ls = sample_levels(&g, 4.0, seed).unwrap();
        for i in 1..=ls.k {
            let level = ls.level(i);
            for v in 0..n {
                if let Some((piv, _)) = level.pivot[v] {
                    prop_assert!(level.sampled.contains(&piv));
                    prop_assert!(level.in_v[v]);
                }
            }
        }
        let h = build_fast_2w(&g, 4.0, seed).unwrap();
        prop_assert!(verify_subgraph(&g, &h.graph));
        let again = build_fast_2w(&g, 4.0, seed).unwrap();
        prop_assert_eq!(h.graph.edges(), again.graph.edges());
    }
}
