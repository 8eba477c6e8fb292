//! Group partitioning of signed graphs.
//!
//! The objective is the correlation-clustering imbalance: the weight of
//! negative edges inside groups plus the weight of positive edges between
//! groups. Neutral edges never count. Four strategies are provided:
//!
//! * [`brute_force_partition`]: exact, by enumerating set partitions (small graphs only).
//! * [`greedy_partition`]: best-improvement single-node relocation with a fixed
//!   number of groups and random restarts.
//! * [`community_partition`]: local-moving maximization of signed modularity;
//!   the number of groups emerges.
//! * [`spectral_partition`]: signed-Laplacian embedding followed by k-means.
//!
//! Every returned [`Partition`] has contiguous group labels, numbered in
//! order of first appearance when nodes are visited by ascending id.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, Sign, SignedGraph};
use crate::json::fixed;

pub type Assignment = BTreeMap<NodeId, usize>;

/// Exhaustive search refuses graphs larger than this.
pub const MAX_BRUTE_FORCE_NODES: usize = 12;
pub const DEFAULT_RESTARTS: usize = 16;
pub const DEFAULT_SPECTRAL_DIM: usize = 8;
const KMEANS_ROUNDS: usize = 50;
const KMEANS_INITS: usize = 10;
const MAX_SWEEPS: usize = 1000;
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    BruteForce,
    Greedy,
    Community,
    SpectralKMeans,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s.to_ascii_lowercase().as_str() {
            "brute" | "brute_force" => Ok(Algorithm::BruteForce),
            "greedy" => Ok(Algorithm::Greedy),
            "community" => Ok(Algorithm::Community),
            "spectral" | "spectral_k_means" => Ok(Algorithm::SpectralKMeans),
            other => Err(Error::InvalidArgument(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::BruteForce => "brute",
            Algorithm::Greedy => "greedy",
            Algorithm::Community => "community",
            Algorithm::SpectralKMeans => "spectral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Imbalance,
    SignedModularity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Assignment,
    /// Number of (non-empty) groups.
    #[serde(rename = "l")]
    pub group_count: usize,
    #[serde(serialize_with = "fixed")]
    pub imbalance: f64,
    pub objective: Objective,
    /// Value of `objective` for this partition.
    #[serde(serialize_with = "fixed")]
    pub score: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Partition {
    /// Members of each group, ascending.
    pub fn groups(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.group_count];
        for (&id, &grp) in &self.assignment {
            out[grp].push(id);
        }
        out
    }
}

/// Signed adjacency with neutral edges dropped; weights are record counts.
struct SignedWeights {
    pos: Vec<Vec<(usize, f64)>>,
    neg: Vec<Vec<(usize, f64)>>,
}

impl SignedWeights {
    fn new(g: &SignedGraph) -> SignedWeights {
        let n = g.node_count();
        let mut pos = vec![Vec::new(); n];
        let mut neg = vec![Vec::new(); n];
        for (a, b, e) in g.indexed_edges() {
            let list = match e.sign {
                Sign::Positive => &mut pos,
                Sign::Negative => &mut neg,
                Sign::Neutral => continue,
            };
            list[a].push((b, e.weight()));
            list[b].push((a, e.weight()));
        }
        SignedWeights { pos, neg }
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn cost(&self, labels: &[usize]) -> f64 {
        let mut total = 0.0;
        for v in 0..self.len() {
            for &(u, w) in &self.pos[v] {
                if u > v && labels[u] != labels[v] {
                    total += w;
                }
            }
            for &(u, w) in &self.neg[v] {
                if u > v && labels[u] == labels[v] {
                    total += w;
                }
            }
        }
        total
    }
}

fn labels_from(g: &SignedGraph, assignment: &Assignment) -> Result<Vec<usize>> {
    let missing: Vec<NodeId> = g.node_ids().filter(|id| !assignment.contains_key(id)).collect();
    if !missing.is_empty() {
        return Err(Error::Contract(format!(
            "assignment misses {} node(s), first {}",
            missing.len(),
            missing[0]
        )));
    }
    Ok(g.node_ids().map(|id| assignment[&id]).collect())
}

/// Weight of negative edges within groups plus positive edges across groups.
pub fn imbalance(g: &SignedGraph, assignment: &Assignment) -> Result<f64> {
    Ok(SignedWeights::new(g).cost(&labels_from(g, assignment)?))
}

/// Signed modularity `w+/(w+ + w-) Q+ - w-/(w+ + w-) Q-`, where `Q+`/`Q-` are
/// Newman modularities of the positive/negative edge subgraphs at resolutions
/// `gamma_pos`/`gamma_neg`. Zero when there are no signed edges.
pub fn signed_modularity(g: &SignedGraph, assignment: &Assignment, gamma_pos: f64, gamma_neg: f64) -> Result<f64> {
    let labels = labels_from(g, assignment)?;
    Ok(modularity_of(&SignedWeights::new(g), &labels, gamma_pos, gamma_neg))
}

fn modularity_of(w: &SignedWeights, labels: &[usize], gamma_pos: f64, gamma_neg: f64) -> f64 {
    let groups = labels.iter().max().map_or(0, |m| m + 1);
    let part = |adj: &[Vec<(usize, f64)>], gamma: f64| -> (f64, f64) {
        let mut internal = vec![0.0; groups];
        let mut degree = vec![0.0; groups];
        let mut m = 0.0;
        for (v, list) in adj.iter().enumerate() {
            for &(u, wt) in list {
                degree[labels[v]] += wt;
                if u > v {
                    m += wt;
                    if labels[u] == labels[v] {
                        internal[labels[v]] += wt;
                    }
                }
            }
        }
        if m == 0.0 {
            return (0.0, 0.0);
        }
        let q = (0..groups)
            .map(|c| internal[c] / m - gamma * (degree[c] / (2.0 * m)).powi(2))
            .sum();
        (q, m)
    };
    let (q_pos, m_pos) = part(&w.pos, gamma_pos);
    let (q_neg, m_neg) = part(&w.neg, gamma_neg);
    let total = m_pos + m_neg;
    if total == 0.0 {
        return 0.0;
    }
    (m_pos / total) * q_pos - (m_neg / total) * q_neg
}

/// Relabels groups by first appearance and drops empty ones.
fn canonical(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let out = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

fn finish(
    g: &SignedGraph,
    w: &SignedWeights,
    labels: &[usize],
    algorithm: Algorithm,
    objective: Objective,
    score: Option<f64>,
    seed: u64,
    warnings: Vec<String>,
) -> Partition {
    let (labels, group_count) = canonical(labels);
    let imbalance = w.cost(&labels);
    Partition {
        assignment: g.node_ids().zip(labels.iter().copied()).collect(),
        group_count,
        imbalance,
        objective,
        score: score.unwrap_or(imbalance),
        algorithm,
        seed,
        warnings,
    }
}

/// Exact minimum-imbalance partition into at most `max_groups` groups.
///
/// Enumerates restricted growth strings depth-first with incremental cost and
/// bound pruning; among optimal partitions the lexicographically smallest
/// canonical assignment is returned.
pub fn brute_force_partition(g: &SignedGraph, max_groups: usize) -> Result<Partition> {
    let n = g.node_count();
    if n > MAX_BRUTE_FORCE_NODES {
        return Err(Error::Guard(format!(
            "brute force limited to {MAX_BRUTE_FORCE_NODES} nodes, graph has {n}"
        )));
    }
    if max_groups == 0 {
        return Err(Error::InvalidArgument("max_groups must be at least 1".into()));
    }
    let w = SignedWeights::new(g);

    struct Search<'a> {
        w: &'a SignedWeights,
        max_groups: usize,
        labels: Vec<usize>,
        best: Vec<usize>,
        best_cost: f64,
    }

    impl Search<'_> {
        // cost of placing `v` into `grp` against already placed nodes u < v
        fn step_cost(&self, v: usize, grp: usize) -> f64 {
            let pos: f64 = self.w.pos[v]
                .iter()
                .filter(|&&(u, _)| u < v && self.labels[u] != grp)
                .map(|&(_, wt)| wt)
                .sum();
            let neg: f64 = self.w.neg[v]
                .iter()
                .filter(|&&(u, _)| u < v && self.labels[u] == grp)
                .map(|&(_, wt)| wt)
                .sum();
            pos + neg
        }

        fn go(&mut self, v: usize, used: usize, cost: f64) {
            if cost >= self.best_cost {
                return;
            }
            if v == self.labels.len() {
                self.best_cost = cost;
                self.best.clone_from(&self.labels);
                return;
            }
            let limit = (used + 1).min(self.max_groups);
            for grp in 0..limit {
                let c = self.step_cost(v, grp);
                self.labels[v] = grp;
                self.go(v + 1, used.max(grp + 1), cost + c);
            }
        }
    }

    let mut s = Search {
        w: &w,
        max_groups,
        labels: vec![0; n],
        best: vec![0; n],
        best_cost: f64::INFINITY,
    };
    s.go(0, 0, 0.0);
    let best = s.best;
    Ok(finish(g, &w, &best, Algorithm::BruteForce, Objective::Imbalance, None, 0, Vec::new()))
}

/// Best-improvement local search from a labeling into `l` groups. Returns the
/// final cost.
fn local_search(w: &SignedWeights, labels: &mut [usize], l: usize) -> f64 {
    let n = w.len();
    // pos_to[v * l + g]: positive weight from v into group g; same for neg_to
    let mut pos_to = vec![0.0; n * l];
    let mut neg_to = vec![0.0; n * l];
    for v in 0..n {
        for &(u, wt) in &w.pos[v] {
            pos_to[v * l + labels[u]] += wt;
        }
        for &(u, wt) in &w.neg[v] {
            neg_to[v * l + labels[u]] += wt;
        }
    }
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for v in 0..n {
            let a = labels[v];
            let stay = neg_to[v * l + a] - pos_to[v * l + a];
            for b in (0..l).filter(|&b| b != a) {
                let delta = (neg_to[v * l + b] - pos_to[v * l + b]) - stay;
                if delta < -EPS && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, v, b));
                }
            }
        }
        let Some((_, v, b)) = best else { break };
        let a = labels[v];
        labels[v] = b;
        for &(u, wt) in &w.pos[v] {
            pos_to[u * l + a] -= wt;
            pos_to[u * l + b] += wt;
        }
        for &(u, wt) in &w.neg[v] {
            neg_to[u * l + a] -= wt;
            neg_to[u * l + b] += wt;
        }
    }
    w.cost(labels)
}

/// Greedy neighborhood search with a known number of groups `l`: random
/// initial labels, then repeatedly apply the single-node relocation that
/// lowers the imbalance most, until none does. Best of `restarts` runs.
pub fn greedy_partition(g: &SignedGraph, l: usize, restarts: usize, seed: u64) -> Result<Partition> {
    let n = g.node_count();
    if l == 0 || l > n {
        return Err(Error::InvalidArgument(format!(
            "group count {l} outside 1..={n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let w = SignedWeights::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts {
        let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..l)).collect();
        let cost = local_search(&w, &mut labels, l);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, labels));
        }
    }
    let (_, labels) = best.expect("at least one restart");
    Ok(finish(g, &w, &labels, Algorithm::Greedy, Objective::Imbalance, None, seed, Vec::new()))
}

/// One level of the community search: a weighted graph whose nodes are
/// communities of the level below. Strengths include internal weight, which
/// the adjacency lists (no self-loops) do not.
struct Level {
    pos: Vec<Vec<(usize, f64)>>,
    neg: Vec<Vec<(usize, f64)>>,
    k_pos: Vec<f64>,
    k_neg: Vec<f64>,
}

impl Level {
    fn base(w: &SignedWeights) -> Level {
        let strength = |adj: &[Vec<(usize, f64)>]| -> Vec<f64> {
            adj.iter().map(|l| l.iter().map(|&(_, wt)| wt).sum()).collect()
        };
        Level {
            k_pos: strength(&w.pos),
            k_neg: strength(&w.neg),
            pos: w.pos.clone(),
            neg: w.neg.clone(),
        }
    }

    fn len(&self) -> usize {
        self.k_pos.len()
    }

    /// Collapses each of `count` communities into one node.
    fn aggregate(&self, labels: &[usize], count: usize) -> Level {
        let collapse = |adj: &[Vec<(usize, f64)>]| -> Vec<Vec<(usize, f64)>> {
            let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
            for (v, list) in adj.iter().enumerate() {
                for &(u, wt) in list {
                    if labels[u] != labels[v] {
                        *acc[labels[v]].entry(labels[u]).or_default() += wt;
                    }
                }
            }
            acc.into_iter().map(|m| m.into_iter().collect()).collect()
        };
        let mut k_pos = vec![0.0; count];
        let mut k_neg = vec![0.0; count];
        for v in 0..self.len() {
            k_pos[labels[v]] += self.k_pos[v];
            k_neg[labels[v]] += self.k_neg[v];
        }
        Level {
            pos: collapse(&self.pos),
            neg: collapse(&self.neg),
            k_pos,
            k_neg,
        }
    }
}

/// Sweeps the nodes of `level` in a shuffled order, moving each into the
/// community with the largest gain, until a sweep moves nothing. Returns
/// canonical labels and whether anything moved.
fn local_moving(level: &Level, c_pos: f64, c_neg: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut tot_pos = level.k_pos.clone();
    let mut tot_neg = level.k_neg.clone();
    let mut size = vec![1usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link_pos = vec![0.0; n];
    let mut link_neg = vec![0.0; n];
    let mut any = false;
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for &v in &order {
            let (kp, kn) = (level.k_pos[v], level.k_neg[v]);
            let own = labels[v];
            tot_pos[own] -= kp;
            tot_neg[own] -= kn;
            size[own] -= 1;
            for &(u, wt) in &level.pos[v] {
                link_pos[labels[u]] += wt;
            }
            for &(u, wt) in &level.neg[v] {
                link_neg[labels[u]] += wt;
            }
            // gain of joining c, up to a positive factor; an empty community scores 0
            let gain = |c: usize| (link_pos[c] - c_pos * kp * tot_pos[c]) - (link_neg[c] - c_neg * kn * tot_neg[c]);
            let mut best_c = own;
            let mut best_gain = gain(own);
            let mut empty = None;
            for c in 0..n {
                if size[c] == 0 {
                    if empty.is_none() && c != own {
                        empty = Some(c);
                    }
                    continue;
                }
                let gc = gain(c);
                if gc > best_gain + EPS {
                    best_c = c;
                    best_gain = gc;
                }
            }
            if size[own] > 0 && best_gain < -EPS {
                // leaving for an empty community beats every existing one
                best_c = empty.expect("some community is empty while v is out");
            }
            for &(u, _) in level.pos[v].iter().chain(&level.neg[v]) {
                link_pos[labels[u]] = 0.0;
                link_neg[labels[u]] = 0.0;
            }
            labels[v] = best_c;
            tot_pos[best_c] += kp;
            tot_neg[best_c] += kn;
            size[best_c] += 1;
            moved |= best_c != own;
        }
        any |= moved;
        if !moved {
            break;
        }
    }
    (canonical(&labels).0, any)
}

/// Multi-level maximization of signed modularity: local moving from
/// singletons (sweep order shuffled by `seed`), then each community is
/// collapsed into one node and local moving repeats on the smaller graph,
/// until a level changes nothing.
pub fn community_partition(g: &SignedGraph, gamma_pos: f64, gamma_neg: f64, seed: u64) -> Result<Partition> {
    if !(gamma_pos.is_finite() && gamma_neg.is_finite() && gamma_pos >= 0.0 && gamma_neg >= 0.0) {
        return Err(Error::InvalidArgument("resolutions must be finite and non-negative".into()));
    }
    let n = g.node_count();
    let w = SignedWeights::new(g);
    let mut level = Level::base(&w);
    let two_m_pos: f64 = level.k_pos.iter().sum();
    let two_m_neg: f64 = level.k_neg.iter().sum();
    let mut warnings = Vec::new();
    if two_m_pos + two_m_neg == 0.0 {
        warnings.push("no positive or negative edges; every node is its own group".to_string());
    }
    // null-model coefficients; a missing sign contributes nothing
    let c_pos = if two_m_pos > 0.0 { gamma_pos / two_m_pos } else { 0.0 };
    let c_neg = if two_m_neg > 0.0 { gamma_neg / two_m_neg } else { 0.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    loop {
        let (moves, moved) = local_moving(&level, c_pos, c_neg, &mut rng);
        if !moved {
            break;
        }
        let count = moves.iter().max().map_or(0, |m| m + 1);
        for l in labels.iter_mut() {
            *l = moves[*l];
        }
        level = level.aggregate(&moves, count);
    }
    let (labels, _) = canonical(&labels);
    let score = modularity_of(&w, &labels, gamma_pos, gamma_neg);
    Ok(finish(
        g,
        &w,
        &labels,
        Algorithm::Community,
        Objective::SignedModularity,
        Some(score),
        seed,
        warnings,
    ))
}

/// Spectral coordinates: eigenvectors of the signed Laplacian `D - A_s`
/// (`D` holds absolute signed strengths) by ascending eigenvalue, skipping
/// constant vectors. Returns one row per node.
fn signed_laplacian_embedding(g: &SignedGraph, columns: usize) -> Result<Vec<Vec<f64>>> {
    let n = g.node_count();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for (a, b, e) in g.indexed_edges() {
        let s = match e.sign {
            Sign::Positive => e.weight(),
            Sign::Negative => -e.weight(),
            Sign::Neutral => continue,
        };
        lap[(a, b)] -= s;
        lap[(b, a)] -= s;
        lap[(a, a)] += s.abs();
        lap[(b, b)] += s.abs();
    }
    let eig = SymmetricEigen::try_new(lap, 1e-12, 10_000)
        .ok_or_else(|| Error::Numeric("signed Laplacian eigen-decomposition did not converge".into()))?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let chosen: Vec<usize> = order
        .into_iter()
        .filter(|&c| {
            let col = eig.eigenvectors.column(c);
            col.max() - col.min() > 1e-8
        })
        .take(columns)
        .collect();
    Ok((0..n)
        .map(|r| chosen.iter().map(|&c| eig.eigenvectors[(r, c)]).collect())
        .collect())
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    centers
        .iter()
        .enumerate()
        .map(|(i, c)| (i, sq_dist(p, c)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// k-means with k-means++ seeding; returns labels and inertia.
fn kmeans_once(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, f64) {
    let n = points.len();
    let mut centers = vec![points[rng.gen_range(0..n)].clone()];
    while centers.len() < k {
        let d2: Vec<f64> = points.iter().map(|p| nearest(p, &centers).1).collect();
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            rng.gen_range(0..n)
        } else {
            let mut r = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, d) in d2.iter().enumerate() {
                if r < *d {
                    pick = i;
                    break;
                }
                r -= d;
            }
            pick
        };
        centers.push(points[next].clone());
    }
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; n];
    for _ in 0..KMEANS_ROUNDS {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let (c, _) = nearest(p, &centers);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            } else {
                // re-seed an empty cluster at the worst-served point
                let far = (0..n)
                    .map(|i| (i, sq_dist(&points[i], &centers[labels[i]])))
                    .fold((0, -1.0), |b, cur| if cur.1 > b.1 { cur } else { b })
                    .0;
                centers[c] = points[far].clone();
                labels[far] = c;
            }
        }
    }
    let inertia = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| sq_dist(p, &centers[l]))
        .sum();
    (labels, inertia)
}

/// Signed spectral embedding plus k-means.
///
/// Nodes are embedded with `min(dim, k - 1, |V| - 1)` bottom non-constant
/// eigenvectors of the signed Laplacian, then clustered by seeded k-means
/// (k-means++ start, at most 50 Lloyd rounds, best of 10 starts).
pub fn spectral_partition(g: &SignedGraph, k: usize, dim: usize, seed: u64) -> Result<Partition> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument("graph is empty".into()));
    }
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 2..={n}")));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("embedding dimension must be at least 1".into()));
    }
    let w = SignedWeights::new(g);
    let columns = dim.min(k - 1).min(n - 1);
    let points = signed_laplacian_embedding(g, columns)?;

    let mut warnings = Vec::new();
    let mut distinct: Vec<Vec<i64>> = points
        .iter()
        .map(|p| p.iter().map(|x| (x * 1e9).round() as i64).collect())
        .collect();
    distinct.sort();
    distinct.dedup();
    let mut k = k;
    if distinct.len() < k {
        warnings.push(format!(
            "only {} distinct embedded points; k reduced from {k}",
            distinct.len()
        ));
        k = distinct.len();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = if k <= 1 || points[0].is_empty() {
        vec![0; n]
    } else {
        let mut best: Option<(Vec<usize>, f64)> = None;
        for _ in 0..KMEANS_INITS {
            let (labels, inertia) = kmeans_once(&points, k, &mut rng);
            if best.as_ref().is_none_or(|(_, b)| inertia < *b - EPS) {
                best = Some((labels, inertia));
            }
        }
        best.expect("at least one k-means start").0
    };
    Ok(finish(
        g,
        &w,
        &labels,
        Algorithm::SpectralKMeans,
        Objective::Imbalance,
        None,
        seed,
        warnings,
    ))
}

/// A partition strategy with its parameters, as accepted by the CLI and the
/// HTTP API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum Strategy {
    #[serde(rename = "brute")]
    BruteForce {
        #[serde(default = "default_max_groups")]
        max_groups: usize,
    },
    Greedy {
        groups: usize,
        #[serde(default = "default_restarts")]
        restarts: usize,
    },
    Community {
        #[serde(default = "one")]
        gamma_pos: f64,
        #[serde(default = "one")]
        gamma_neg: f64,
    },
    Spectral {
        k: usize,
        #[serde(default = "default_dim")]
        dim: usize,
    },
}

fn default_max_groups() -> usize {
    MAX_BRUTE_FORCE_NODES
}
fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}
fn one() -> f64 {
    1.0
}
fn default_dim() -> usize {
    DEFAULT_SPECTRAL_DIM
}

impl Strategy {
    pub fn community() -> Strategy {
        Strategy::Community {
            gamma_pos: 1.0,
            gamma_neg: 1.0,
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            Strategy::BruteForce { .. } => Algorithm::BruteForce,
            Strategy::Greedy { .. } => Algorithm::Greedy,
            Strategy::Community { .. } => Algorithm::Community,
            Strategy::Spectral { .. } => Algorithm::SpectralKMeans,
        }
    }

    /// Runs the strategy. Group counts above the node count are clamped so
    /// that small subgraphs still get an answer.
    pub fn run(&self, g: &SignedGraph, seed: u64) -> Result<Partition> {
        let n = g.node_count();
        let mut p = match *self {
            Strategy::BruteForce { max_groups } => brute_force_partition(g, max_groups)?,
            Strategy::Greedy { groups, restarts } => greedy_partition(g, groups.min(n).max(1), restarts, seed)?,
            Strategy::Community { gamma_pos, gamma_neg } => community_partition(g, gamma_pos, gamma_neg, seed)?,
            Strategy::Spectral { k, dim } if n < 2 => {
                let _ = (k, dim);
                // a single node cannot be split; report the trivial partition
                let w = SignedWeights::new(g);
                finish(
                    g,
                    &w,
                    &vec![0; n],
                    Algorithm::SpectralKMeans,
                    Objective::Imbalance,
                    None,
                    seed,
                    vec!["fewer than two nodes; trivial partition".into()],
                )
            }
            Strategy::Spectral { k, dim } => spectral_partition(g, k.min(n), dim, seed)?,
        };
        if let Strategy::Greedy { groups, .. } | Strategy::Spectral { k: groups, .. } = *self {
            if groups > n {
                p.warnings.push(format!("requested {groups} groups for {n} nodes; clamped"));
            }
        }
        Ok(p)
    }
}
