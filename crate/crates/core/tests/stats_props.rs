use lensnet_core::stats::{average_clustering, average_path_length, degree_histogram, local_clustering};
use lensnet_core::{Sign, SignedGraph};
use lensnet_testkit as tk;
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = SignedGraph> {
    (2usize..25, 0.0f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| tk::gnp(&mut tk::rng(seed), n, p, 0))
}

proptest! {
    #[test]
    fn clustering_matches_triple_count(g in graph_strategy()) {
        let got = local_clustering(&g, false);
        for (a, b) in got.iter().zip(tk::local_clustering(&g)) {
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(a));
        }
    }

    #[test]
    fn path_length_matches_floyd_warshall(g in graph_strategy()) {
        prop_assert!((average_path_length(&g).average - tk::average_path_length(&g)).abs() < 1e-12);
    }

    #[test]
    fn histogram_counts_every_node(g in graph_strategy()) {
        let h = degree_histogram(&g);
        prop_assert_eq!(h.iter().map(|c| c.count).sum::<usize>(), g.node_count());
        prop_assert_eq!(h.iter().map(|c| c.degree * c.count).sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn equal_weights_make_weighted_clustering_unweighted(n in 3usize..15, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = tk::signed_gnp(&mut tk::rng(seed), n, p);
        let flat = g.edges().iter().fold(
            g.node_ids().fold(SignedGraph::builder(), |b, id| b.node(id)),
            |b, e| b.edge(e.u, e.v, Sign::Positive, 1),
        ).build().unwrap();
        for (a, b) in local_clustering(&flat, true).iter().zip(local_clustering(&flat, false)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    // Joining two components can add long paths to the average, so the
    // monotonicity check only adds edges inside a component.
    #[test]
    fn adding_an_edge_inside_a_component_never_lengthens_paths(
        n in 3usize..20, p in 0.1f64..0.5, seed in any::<u64>(), pick in any::<prop::sample::Index>()
    ) {
        let g = tk::gnp(&mut tk::rng(seed), n, p, 0);
        let d = tk::distances(&g);
        let candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| matches!(d[i][j], Some(x) if x >= 2))
            .collect();
        prop_assume!(!candidates.is_empty());
        let (i, j) = candidates[pick.index(candidates.len())];
        let before = average_path_length(&g).average;
        let mut edges = g.edges().to_vec();
        let extra = SignedGraph::builder().positive(i as u64, j as u64).build().unwrap();
        edges.push(extra.edges()[0].clone());
        let h = SignedGraph::new(g.persons().to_vec(), edges).unwrap();
        prop_assert!(average_path_length(&h).average <= before + 1e-12);
    }
}

#[test]
fn complete_graph_is_fully_clustered() {
    let mut b = SignedGraph::builder();
    for i in 0..6u64 {
        for j in (i + 1)..6 {
            b = b.negative(i, j);
        }
    }
    let g = b.build().unwrap();
    assert_eq!(average_clustering(&g, false), 1.0);
    assert_eq!(average_clustering(&g, true), 1.0);
    assert_eq!(average_path_length(&g).average, 1.0);
}
