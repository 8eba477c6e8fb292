use lensnet_core::subgraph::{ball_sizes, extract_subgraph, DEFAULT_DEPTH_CAP};
use lensnet_core::{Error, NodeId, SeedQuery};
use lensnet_testkit as tk;
use proptest::prelude::*;

proptest! {
    #[test]
    fn extraction_matches_bfs_ball(
        n in 1usize..60, p in 0.0f64..0.2, seed in any::<u64>(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4), depth in 0usize..=4,
    ) {
        let g = tk::gnp(&mut tk::rng(seed), n, p, 0);
        let seeds: Vec<NodeId> = picks.iter().map(|i| NodeId(i.index(n) as u64)).collect();
        let q = SeedQuery::new(seeds.iter().copied(), depth).unwrap();
        let sub = extract_subgraph(&g, &q, DEFAULT_DEPTH_CAP).unwrap();
        let want = tk::ball(&g, &seeds, depth);
        prop_assert_eq!(sub.node_ids().collect::<std::collections::BTreeSet<_>>(), want.clone());
        prop_assert_eq!(sub, g.induced_subgraph(want.iter().copied()).unwrap());

        let sizes = ball_sizes(&g, &q, DEFAULT_DEPTH_CAP).unwrap();
        prop_assert_eq!(sizes.len(), depth + 1);
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        for (d, &s) in sizes.iter().enumerate() {
            prop_assert_eq!(s, tk::ball(&g, &seeds, d).len());
        }
    }
}

#[test]
fn depth_zero_keeps_only_seeds() {
    let g = tk::gnp(&mut tk::rng(3), 30, 0.3, 0);
    let q = SeedQuery::new([NodeId(1), NodeId(7)], 0).unwrap();
    let sub = extract_subgraph(&g, &q, DEFAULT_DEPTH_CAP).unwrap();
    assert_eq!(sub.node_ids().collect::<Vec<_>>(), vec![NodeId(1), NodeId(7)]);
    assert_eq!(sub.edge_count(), usize::from(g.edge(NodeId(1), NodeId(7)).is_some()));
}

#[test]
fn guards() {
    let g = tk::gnp(&mut tk::rng(3), 10, 0.3, 0);
    let deep = SeedQuery::new([NodeId(1)], 5).unwrap();
    assert!(matches!(extract_subgraph(&g, &deep, DEFAULT_DEPTH_CAP), Err(Error::Guard(_))));
    assert!(extract_subgraph(&g, &deep, 5).is_ok());
    let unknown = SeedQuery::new([NodeId(1), NodeId(99)], 1).unwrap();
    match extract_subgraph(&g, &unknown, DEFAULT_DEPTH_CAP) {
        Err(Error::NotFound(ids)) => assert_eq!(ids, vec![NodeId(99)]),
        other => panic!("expected NotFound, got {other:?}"),
    }
    assert!(SeedQuery::new([], 1).is_err());
}
