//! Degree, betweenness, closeness and eigenvector centrality.
//!
//! All four measures treat the graph as unsigned and unweighted: a
//! relationship is a link regardless of its sign or record count.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedGraph};
use crate::json::fixed;
use crate::traverse::{self, UNREACHED};

pub type Scores = BTreeMap<NodeId, f64>;

fn to_scores(g: &SignedGraph, values: Vec<f64>) -> Scores {
    g.node_ids().zip(values).collect()
}

/// `deg(v) / (|V| - 1)`. Empty when the graph has fewer than two nodes,
/// since the normalization is undefined.
pub fn degree_centrality(g: &SignedGraph) -> Scores {
    let n = g.node_count();
    if n < 2 {
        return Scores::new();
    }
    let denom = (n - 1) as f64;
    to_scores(g, (0..n).map(|i| g.degree_at(i) as f64 / denom).collect())
}

fn brandes_from(g: &SignedGraph, s: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut dist = vec![UNREACHED; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    sigma[s] = 1.0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in g.neighbors_at(v) {
            if dist[w] == UNREACHED {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    for &w in order.iter().rev() {
        for &v in &preds[w] {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
    }
    delta[s] = 0.0;
    delta
}

/// Sum over unordered pairs `{s, t}` not containing `v` of the fraction of
/// shortest `s`-`t` paths through `v`. With `normalized`, divides by
/// `(n - 1)(n - 2) / 2`.
pub fn betweenness_centrality(g: &SignedGraph, normalized: bool) -> Scores {
    let n = g.node_count();
    let partials = traverse::per_source(n, |s| brandes_from(g, s));
    let mut total = vec![0.0; n];
    for delta in partials {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    // every unordered pair was accumulated from both ends
    let mut scale = 0.5;
    if normalized && n > 2 {
        scale /= ((n - 1) * (n - 2)) as f64 / 2.0;
    }
    to_scores(g, total.into_iter().map(|b| b * scale).collect())
}

/// Reachability-scaled closeness: with `r` nodes reachable from `v`,
/// `(r / (|V| - 1)) * (r / sum of distances)`, and 0 when nothing is reachable.
pub fn closeness_centrality(g: &SignedGraph) -> Scores {
    let n = g.node_count();
    let values = traverse::per_source(n, |v| {
        let (sum, reach) = traverse::bfs_distances(g, v)
            .into_iter()
            .filter(|&d| d != UNREACHED && d > 0)
            .fold((0usize, 0usize), |(s, r), d| (s + d, r + 1));
        if reach == 0 {
            0.0
        } else {
            let r = reach as f64;
            (r / (n - 1) as f64) * (r / sum as f64)
        }
    });
    to_scores(g, values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvectorResult {
    pub scores: Scores,
    pub converged: bool,
    pub iterations: usize,
    /// Node count of the component the vector is supported on.
    pub component_size: usize,
    pub warning: Option<String>,
}

pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Power iteration for the leading eigenvector of the adjacency matrix of the
/// largest connected component (ties: the component holding the smallest
/// NodeId). Nodes outside it score 0.
///
/// Iterates on `A + I`, which has the same leading eigenvector as `A` but no
/// eigenvalue of equal magnitude and opposite sign, so bipartite components
/// converge too. Stops when successive unit-norm iterates differ by less than
/// `tol` in 1-norm.
pub fn eigenvector_centrality(g: &SignedGraph, max_iter: usize, tol: f64) -> EigenvectorResult {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return EigenvectorResult {
            scores: to_scores(g, vec![0.0; n]),
            converged: false,
            iterations: 0,
            component_size: 0,
            warning: Some("graph has no edges; eigenvector centrality is zero".into()),
        };
    }
    let (label, count) = traverse::components(g);
    let mut sizes = vec![0usize; count];
    for &l in &label {
        sizes[l] += 1;
    }
    // first maximum = lowest label = component containing the smallest id
    let comp = (0..count).fold(0, |best, c| if sizes[c] > sizes[best] { c } else { best });
    let members: Vec<usize> = (0..n).filter(|&i| label[i] == comp).collect();

    let mut x = vec![0.0; n];
    let start = 1.0 / (members.len() as f64).sqrt();
    for &i in &members {
        x[i] = start;
    }
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        for &i in &members {
            next[i] = x[i] + g.neighbors_at(i).map(|j| x[j]).sum::<f64>();
        }
        let norm = members.iter().map(|&i| next[i] * next[i]).sum::<f64>().sqrt();
        let mut diff = 0.0;
        for &i in &members {
            next[i] /= norm;
            diff += (next[i] - x[i]).abs();
        }
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            converged = true;
            break;
        }
    }
    EigenvectorResult {
        scores: to_scores(g, x),
        converged,
        iterations,
        component_size: members.len(),
        warning: (!converged).then(|| format!("power iteration did not converge in {max_iter} iterations")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Eigenvector,
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Measure> {
        match s.to_ascii_lowercase().as_str() {
            "degree" => Ok(Measure::Degree),
            "betweenness" => Ok(Measure::Betweenness),
            "closeness" => Ok(Measure::Closeness),
            "eigenvector" => Ok(Measure::Eigenvector),
            other => Err(Error::InvalidArgument(format!("unknown centrality measure `{other}`"))),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Eigenvector => "eigenvector",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityRow {
    pub id: NodeId,
    pub name_en: String,
    #[serde(serialize_with = "fixed")]
    pub degree: f64,
    #[serde(serialize_with = "fixed")]
    pub betweenness: f64,
    #[serde(serialize_with = "fixed")]
    pub closeness: f64,
    #[serde(serialize_with = "fixed")]
    pub eigenvector: f64,
}

impl CentralityRow {
    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::Degree => self.degree,
            Measure::Betweenness => self.betweenness,
            Measure::Closeness => self.closeness,
            Measure::Eigenvector => self.eigenvector,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityOptions {
    pub normalized_betweenness: bool,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            normalized_betweenness: false,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
        }
    }
}

/// All four measures for every node, in ascending id order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub betweenness_normalized: bool,
    pub eigenvector_converged: bool,
    pub eigenvector_iterations: usize,
    pub eigenvector_component_size: usize,
    pub warnings: Vec<String>,
    pub rows: Vec<CentralityRow>,
}

pub fn centrality_report(g: &SignedGraph, opts: &CentralityOptions) -> CentralityReport {
    let mut warnings = Vec::new();
    let degree = degree_centrality(g);
    if g.node_count() < 2 {
        warnings.push("fewer than two nodes; degree centrality reported as 0".to_string());
    }
    let betweenness = betweenness_centrality(g, opts.normalized_betweenness);
    let closeness = closeness_centrality(g);
    let eig = eigenvector_centrality(g, opts.max_iter, opts.tol);
    warnings.extend(eig.warning.clone());
    let rows = g
        .persons()
        .iter()
        .map(|p| CentralityRow {
            id: p.id,
            name_en: p.name_en.clone(),
            degree: degree.get(&p.id).copied().unwrap_or(0.0),
            betweenness: betweenness[&p.id],
            closeness: closeness[&p.id],
            eigenvector: eig.scores[&p.id],
        })
        .collect();
    CentralityReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        betweenness_normalized: opts.normalized_betweenness,
        eigenvector_converged: eig.converged,
        eigenvector_iterations: eig.iterations,
        eigenvector_component_size: eig.component_size,
        warnings,
        rows,
    }
}

/// Top `k` rows by `order_by`, descending, ties by ascending id. `k` larger
/// than the graph returns every row.
pub fn top_central(report: &CentralityReport, k: usize, order_by: Measure) -> Result<Vec<CentralityRow>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| {
        b.get(order_by)
            .total_cmp(&a.get(order_by))
            .then(a.id.cmp(&b.id))
    });
    rows.truncate(k);
    Ok(rows)
}
