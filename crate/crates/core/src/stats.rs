//! Descriptive network statistics: size, average clustering, average path
//! length and the degree distribution.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::SignedGraph;
use crate::json::fixed;
use crate::traverse::{self, UNREACHED};

/// Local clustering coefficient of every node, in node order.
///
/// Unweighted: `2 t(v) / (k (k - 1))`. Weighted: the geometric-mean form
/// `1 / (k (k - 1)) * sum over ordered neighbor pairs (j, k) of
/// (w_vj w_vk w_jk)^(1/3)` with weights divided by the largest edge weight.
/// Nodes with fewer than two neighbors get 0.
pub fn local_clustering(g: &SignedGraph, weighted: bool) -> Vec<f64> {
    let n = g.node_count();
    let max_w = g.edges().iter().map(|e| e.weight()).fold(0.0, f64::max);
    let mut mark = vec![f64::NAN; n];
    let mut out = vec![0.0; n];
    for v in 0..n {
        let k = g.degree_at(v);
        if k < 2 {
            continue;
        }
        let nbrs: Vec<(usize, f64)> = g.incident_at(v).map(|(j, e)| (j, e.weight() / max_w)).collect();
        let mut sum = 0.0;
        for &(j, w_vj) in &nbrs {
            for (x, e) in g.incident_at(j) {
                mark[x] = e.weight() / max_w;
            }
            for &(x, w_vx) in &nbrs {
                if x > j && !mark[x].is_nan() {
                    sum += if weighted {
                        (w_vj * w_vx * mark[x]).cbrt()
                    } else {
                        1.0
                    };
                }
            }
            for x in g.neighbors_at(j) {
                mark[x] = f64::NAN;
            }
        }
        out[v] = 2.0 * sum / (k * (k - 1)) as f64;
    }
    out
}

/// Mean local clustering over all nodes; 0 for the empty graph.
pub fn average_clustering(g: &SignedGraph, weighted: bool) -> f64 {
    if g.is_empty() {
        return 0.0;
    }
    local_clustering(g, weighted).iter().sum::<f64>() / g.node_count() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLengthSummary {
    /// Mean hop distance over ordered, mutually reachable pairs `u != v`.
    pub average: f64,
    pub reachable_pairs: u64,
    pub components: usize,
}

pub fn average_path_length(g: &SignedGraph) -> PathLengthSummary {
    let per_source = traverse::per_source(g.node_count(), |s| {
        traverse::bfs_distances(g, s)
            .into_iter()
            .filter(|&d| d != UNREACHED && d > 0)
            .fold((0u64, 0u64), |(sum, cnt), d| (sum + d as u64, cnt + 1))
    });
    let (total, pairs) = per_source
        .into_iter()
        .fold((0u64, 0u64), |(a, b), (s, c)| (a + s, b + c));
    PathLengthSummary {
        average: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
        reachable_pairs: pairs,
        components: traverse::components(g).1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeCount {
    pub degree: usize,
    pub count: usize,
}

/// Degree distribution sorted by ascending degree.
pub fn degree_histogram(g: &SignedGraph) -> Vec<DegreeCount> {
    let mut hist = BTreeMap::new();
    for i in 0..g.node_count() {
        *hist.entry(g.degree_at(i)).or_insert(0) += 1;
    }
    hist.into_iter()
        .map(|(degree, count)| DegreeCount { degree, count })
        .collect()
}

pub fn degree_histogram_csv(hist: &[DegreeCount]) -> String {
    let mut out = String::from("degree,count\n");
    for h in hist {
        out.push_str(&format!("{},{}\n", h.degree, h.count));
    }
    out
}

pub const PATH_LENGTH_DEFINITION: &str =
    "mean unweighted hop distance over ordered mutually reachable pairs";

/// One row of the per-dynasty network table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub dynasty: Option<String>,
    pub nodes: usize,
    pub edges: usize,
    #[serde(serialize_with = "fixed")]
    pub average_clustering: f64,
    #[serde(serialize_with = "fixed")]
    pub average_path_length: f64,
    pub reachable_pairs: u64,
    pub components: usize,
    pub isolated_nodes: usize,
    pub path_length_definition: &'static str,
}

pub fn network_stats(g: &SignedGraph, dynasty: Option<&str>) -> NetworkStats {
    let paths = average_path_length(g);
    NetworkStats {
        dynasty: dynasty.map(str::to_string),
        nodes: g.node_count(),
        edges: g.edge_count(),
        average_clustering: average_clustering(g, false),
        average_path_length: paths.average,
        reachable_pairs: paths.reachable_pairs,
        components: paths.components,
        isolated_nodes: (0..g.node_count()).filter(|&i| g.degree_at(i) == 0).count(),
        path_length_definition: PATH_LENGTH_DEFINITION,
    }
}

impl NetworkStats {
    /// Fixed-width text table with the same columns as the per-dynasty summary.
    pub fn table(rows: &[NetworkStats]) -> String {
        let mut out = format!(
            "{:<12} {:>10} {:>10} {:>12} {:>12} {:>11}\n",
            "network", "|V|", "|E|", "avg_clust", "avg_path", "components"
        );
        for r in rows {
            out.push_str(&format!(
                "{:<12} {:>10} {:>10} {:>12.3} {:>12.2} {:>11}\n",
                r.dynasty.as_deref().unwrap_or("all"),
                r.nodes,
                r.edges,
                r.average_clustering,
                r.average_path_length,
                r.components
            ));
        }
        out
    }
}
