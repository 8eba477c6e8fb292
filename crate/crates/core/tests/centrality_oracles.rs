use lensnet_core::centrality::{
    betweenness_centrality, closeness_centrality, degree_centrality, eigenvector_centrality,
};
use lensnet_core::SignedGraph;
use lensnet_testkit as tk;

const TOL: f64 = 1e-6;

fn close(label: &str, got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= TOL, "{label}[{i}]: got {g}, want {w}");
    }
}

fn graphs() -> Vec<SignedGraph> {
    let mut rng = tk::rng(11);
    let mut out = Vec::new();
    for (i, p) in [0.05, 0.2, 0.5].into_iter().cycle().take(24).enumerate() {
        out.push(tk::gnp(&mut rng, 3 + i, p, 100));
    }
    out
}

#[test]
fn degree_betweenness_closeness_match_oracles() {
    for g in graphs() {
        let n = g.node_count() as f64;
        close("degree", &degree_centrality(&g).into_values().collect::<Vec<_>>(), &tk::degree_centrality(&g));
        let raw = tk::betweenness(&g);
        close("betweenness", &betweenness_centrality(&g, false).into_values().collect::<Vec<_>>(), &raw);
        let scaled: Vec<f64> = raw.iter().map(|b| b * 2.0 / ((n - 1.0) * (n - 2.0))).collect();
        close("betweenness_norm", &betweenness_centrality(&g, true).into_values().collect::<Vec<_>>(), &scaled);
        close("closeness", &closeness_centrality(&g).into_values().collect::<Vec<_>>(), &tk::closeness(&g));
    }
}

#[test]
fn eigenvector_matches_dense_eigensolver() {
    for g in graphs() {
        if g.edge_count() == 0 {
            continue;
        }
        let r = eigenvector_centrality(&g, 20_000, 1e-13);
        assert!(r.converged, "no convergence after {} iterations", r.iterations);
        close("eigenvector", &r.scores.into_values().collect::<Vec<_>>(), &tk::eigenvector(&g));
    }
}

#[test]
fn bipartite_component_converges() {
    // even cycle: plain power iteration on A oscillates
    let g = (0..6u64).fold(SignedGraph::builder(), |b, i| b.positive(i, (i + 1) % 6)).build().unwrap();
    let r = eigenvector_centrality(&g, 1_000, 1e-12);
    assert!(r.converged);
    close("eigenvector", &r.scores.into_values().collect::<Vec<_>>(), &tk::eigenvector(&g));
}
