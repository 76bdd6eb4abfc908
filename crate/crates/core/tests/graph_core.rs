mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wspanner::generate::{generate, Family, GenSpec, WeightModel};
use wspanner::{build_index, sssp_canonical, WeightedGraph};

use common::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let k = pairs.len();
            (
                Just(n),
                Just(pairs),
                prop::collection::vec(prop::option::weighted(0.5, 1u32..6), k),
            )
        })
        .prop_map(|(n, pairs, ws)| {
            let edges = pairs
                .into_iter()
                .zip(ws)
                .filter_map(|((u, v), w)| w.map(|w| (u, v, w as f64 * 0.5 + 0.5)));
            WeightedGraph::new(n, edges).unwrap()
        })
}

proptest! {
    #[test]
    fn distances_match_floyd_warshall(g in arb_graph(12)) {
        let idx = build_index(&g);
        prop_assert_eq!(idx.dist_matrix(), &floyd_warshall(&g)[..]);
    }

    #[test]
    fn canonical_path_is_brute_force_minimum(g in arb_graph(7)) {
        let idx = build_index(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                let brute = brute_canonical(&g, u, v);
                let ours = idx.path_vertices(u, v).ok();
                prop_assert_eq!(ours, brute);
            }
        }
    }

    #[test]
    fn index_invariants(g in arb_graph(10)) {
        let idx = build_index(&g);
        let n = g.n();
        for u in 0..n {
            prop_assert_eq!(idx.dist(u, u), 0.0);
            prop_assert_eq!(idx.w(u, u), 0.0);
            for v in 0..n {
                prop_assert_eq!(idx.dist(u, v), idx.dist(v, u));
                if !idx.connected(u, v) || u == v {
                    continue;
                }
                let p = idx.canonical_path(&g, u, v).unwrap();
                prop_assert_eq!(p.total_weight, idx.dist(u, v));
                prop_assert_eq!(p.max_edge_weight, idx.w(u, v));
                prop_assert!(idx.w(u, v) >= idx.dist(u, v) / p.hops() as f64);
                prop_assert!(idx.w(u, v) <= idx.dist(u, v));
                let mut back = idx.path_vertices(v, u).unwrap();
                back.reverse();
                prop_assert_eq!(&back, &p.vertices);
                for x in 0..n {
                    if idx.connected(u, x) {
                        prop_assert!(idx.dist(u, v) <= idx.dist(u, x) + idx.dist(x, v));
                    }
                }
            }
        }
    }

    #[test]
    fn subpaths_are_canonical(g in arb_graph(12)) {
        let idx = build_index(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                let Ok(p) = idx.path_vertices(u, v) else { continue };
                for i in 0..p.len() {
                    for j in i..p.len() {
                        let sub = idx.path_vertices(p[i], p[j]).unwrap();
                        prop_assert_eq!(&sub[..], &p[i..=j]);
                        prop_assert_eq!(idx.dist(u, v), idx.dist(u, p[i]) + idx.dist(p[i], v));
                    }
                }
            }
        }
    }
}

#[test]
fn four_cycle_parent_chain_uses_lower_neighbor() {
    let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
    let t = sssp_canonical(&g, 0);
    assert_eq!(t.dist[2], 2.0);
    assert_eq!(t.parent[2], Some(1));
    assert_eq!(brute_canonical(&g, 0, 2), Some(vec![0, 1, 2]));
}

#[test]
fn triangle_matches_brute_force() {
    let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).unwrap();
    let idx = build_index(&g);
    let brute = brute_canonical(&g, 0, 2).unwrap();
    assert_eq!(brute, vec![0, 1, 2]);
    assert_eq!(idx.path_vertices(0, 2).unwrap(), brute);
    assert_eq!(idx.dist(0, 2), 2.0);
    assert_eq!(idx.w(0, 2), 1.0);
}

#[test]
fn grid_corners_take_fixed_staircase() {
    // frozen from enumerating the six monotone staircases under the path key
    let g = generate(&GenSpec::new(Family::Grid, 9, WeightModel::Unit, 0)).unwrap();
    let idx = build_index(&g);
    let expected = vec![0, 1, 2, 5, 8];
    assert_eq!(brute_canonical(&g, 0, 8).unwrap(), expected);
    for _ in 0..3 {
        assert_eq!(idx.path_vertices(0, 8).unwrap(), expected);
        assert_eq!(build_index(&g).path_vertices(8, 0).unwrap(), vec![8, 5, 2, 1, 0]);
    }
}

#[test]
fn random_path_pairs_intersect_once() {
    let corpus: Vec<_> = mixed_corpus().into_iter().take(30).collect();
    let indices: Vec<_> = corpus.iter().map(|(_, g)| build_index(g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    while checked < 2000 {
        let i = rng.random_range(0..corpus.len());
        let (g, idx) = (&corpus[i].1, &indices[i]);
        let mut pick = || {
            let u = rng.random_range(0..g.n());
            let v = rng.random_range(0..g.n());
            idx.path_vertices(u, v).ok()
        };
        if let (Some(p), Some(q)) = (pick(), pick()) {
            assert!(single_intersection(&p, &q), "{p:?} vs {q:?}");
            checked += 1;
        }
    }
}

#[test]
fn disconnected_pairs_are_marked() {
    let g = WeightedGraph::new(5, [(0, 1, 1.0), (2, 3, 2.0)]).unwrap();
    let idx = build_index(&g);
    assert!(!idx.connected(0, 4));
    assert!(idx.dist(1, 2).is_infinite());
    assert!(idx.canonical_path(&g, 0, 3).is_err());
}
