//! Test support: seeded random signed graphs and slow, obviously-correct
//! oracles that share no code with the algorithms they check.

use std::collections::{BTreeSet, VecDeque};

use lensnet_core::{NodeId, Sign, SignedGraph};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph on ids `0..n` (plus `id_offset`), signs uniform over
/// {+, -, 0}, record counts 1..=3.
pub fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64, id_offset: u64) -> SignedGraph {
    let mut b = (0..n as u64).fold(SignedGraph::builder(), |b, i| b.node(i + id_offset));
    for i in 0..n as u64 {
        for j in (i + 1)..n as u64 {
            if rng.gen_bool(p) {
                let sign = match rng.gen_range(0..3) {
                    0 => Sign::Positive,
                    1 => Sign::Negative,
                    _ => Sign::Neutral,
                };
                b = b.edge(i + id_offset, j + id_offset, sign, rng.gen_range(1..=3));
            }
        }
    }
    b.build().unwrap()
}

/// Random graph with only positive and negative edges, counts 1..=3.
pub fn signed_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SignedGraph {
    let mut b = (0..n as u64).fold(SignedGraph::builder(), |b, i| b.node(i));
    for i in 0..n as u64 {
        for j in (i + 1)..n as u64 {
            if rng.gen_bool(p) {
                let sign = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
                b = b.edge(i, j, sign, rng.gen_range(1..=3));
            }
        }
    }
    b.build().unwrap()
}

/// Structurally balanced graph from a random 2-coloring: positive edges
/// within a color, negative across. Returns the graph and the coloring.
pub fn balanced(rng: &mut ChaCha8Rng, n: usize, p: f64) -> (SignedGraph, Vec<bool>) {
    let color: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut b = (0..n as u64).fold(SignedGraph::builder(), |b, i| b.node(i));
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                let sign = if color[i] == color[j] { Sign::Positive } else { Sign::Negative };
                b = b.edge(i as u64, j as u64, sign, rng.gen_range(1..=3));
            }
        }
    }
    (b.build().unwrap(), color)
}

/// Dense boolean adjacency in node order, read straight off the edge list.
pub fn adjacency(g: &SignedGraph) -> Vec<Vec<bool>> {
    let ids: Vec<NodeId> = g.node_ids().collect();
    let pos = |id: NodeId| ids.binary_search(&id).unwrap();
    let mut a = vec![vec![false; ids.len()]; ids.len()];
    for e in g.edges() {
        let (i, j) = (pos(e.u), pos(e.v));
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// Floyd–Warshall hop distances; `None` when unreachable.
pub fn distances(g: &SignedGraph) -> Vec<Vec<Option<usize>>> {
    let a = adjacency(g);
    let n = a.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|ij| ik + kj < ij) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

pub fn degree_centrality(g: &SignedGraph) -> Vec<f64> {
    let a = adjacency(g);
    let n = a.len() as f64;
    a.iter()
        .map(|row| row.iter().filter(|&&x| x).count() as f64 / (n - 1.0))
        .collect()
}

/// Betweenness by explicitly enumerating every shortest path of every
/// unordered pair.
pub fn betweenness(g: &SignedGraph) -> Vec<f64> {
    let a = adjacency(g);
    let d = distances(g);
    let n = a.len();
    let mut out = vec![0.0; n];

    fn walk(
        a: &[Vec<bool>],
        d: &[Vec<Option<usize>>],
        t: usize,
        path: &mut Vec<usize>,
        paths: &mut Vec<Vec<usize>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == t {
            paths.push(path.clone());
            return;
        }
        let rest = d[cur][t].unwrap();
        for next in 0..a.len() {
            if a[cur][next] && d[next][t] == Some(rest - 1) {
                path.push(next);
                walk(a, d, t, path, paths);
                path.pop();
            }
        }
    }

    for s in 0..n {
        for t in (s + 1)..n {
            if d[s][t].is_none() {
                continue;
            }
            let mut paths = Vec::new();
            walk(&a, &d, t, &mut vec![s], &mut paths);
            let total = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                out[v] += through / total;
            }
        }
    }
    out
}

pub fn closeness(g: &SignedGraph) -> Vec<f64> {
    let d = distances(g);
    let n = d.len();
    (0..n)
        .map(|v| {
            let reach: Vec<usize> = (0..n).filter(|&u| u != v).filter_map(|u| d[v][u]).collect();
            if reach.is_empty() {
                return 0.0;
            }
            let r = reach.len() as f64;
            let sum: usize = reach.iter().sum();
            (r / (n as f64 - 1.0)) * (r / sum as f64)
        })
        .collect()
}

/// Perron vector of the largest component (ties: the one holding the smallest
/// id) from a dense symmetric eigendecomposition; zero elsewhere.
pub fn eigenvector(g: &SignedGraph) -> Vec<f64> {
    let a = adjacency(g);
    let d = distances(g);
    let n = a.len();
    let mut best: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&u| d[s][u].is_some()).collect();
        for &u in &comp {
            seen[u] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    let m = best.len();
    let sub = DMatrix::from_fn(m, m, |i, j| if a[best[i]][best[j]] { 1.0f64 } else { 0.0 });
    let eig = SymmetricEigen::new(sub);
    let top = eig.eigenvalues.argmax().0;
    let v = eig.eigenvectors.column(top);
    let norm = v.norm();
    let mut out = vec![0.0; n];
    for (i, &node) in best.iter().enumerate() {
        out[node] = v[i].abs() / norm;
    }
    out
}

/// Local clustering by enumerating all node triples.
pub fn local_clustering(g: &SignedGraph) -> Vec<f64> {
    let a = adjacency(g);
    let n = a.len();
    (0..n)
        .map(|v| {
            let k = a[v].iter().filter(|&&x| x).count();
            if k < 2 {
                return 0.0;
            }
            let mut t = 0;
            for x in 0..n {
                for y in (x + 1)..n {
                    if a[v][x] && a[v][y] && a[x][y] {
                        t += 1;
                    }
                }
            }
            2.0 * t as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// Mean distance over ordered reachable pairs, or 0.
pub fn average_path_length(g: &SignedGraph) -> f64 {
    let d = distances(g);
    let dists: Vec<usize> = d
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |(j, _)| *j != i).filter_map(|(_, x)| *x))
        .collect();
    if dists.is_empty() {
        0.0
    } else {
        dists.iter().sum::<usize>() as f64 / dists.len() as f64
    }
}

/// Nodes within `depth` hops of any seed, by one plain BFS per seed.
pub fn ball(g: &SignedGraph, seeds: &[NodeId], depth: usize) -> BTreeSet<NodeId> {
    let a = adjacency(g);
    let ids: Vec<NodeId> = g.node_ids().collect();
    let mut out = BTreeSet::new();
    for s in seeds {
        let start = ids.binary_search(s).unwrap();
        let mut dist = vec![usize::MAX; ids.len()];
        dist[start] = 0;
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            out.insert(ids[v]);
            if dist[v] == depth {
                continue;
            }
            for w in 0..ids.len() {
                if a[v][w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
    }
    out
}

/// Imbalance recomputed edge by edge from group labels in node order.
pub fn imbalance(g: &SignedGraph, labels: &[usize]) -> f64 {
    let ids: Vec<NodeId> = g.node_ids().collect();
    let pos = |id: NodeId| ids.binary_search(&id).unwrap();
    g.edges()
        .iter()
        .map(|e| {
            let same = labels[pos(e.u)] == labels[pos(e.v)];
            match (e.sign, same) {
                (Sign::Negative, true) | (Sign::Positive, false) => e.weight(),
                _ => 0.0,
            }
        })
        .sum()
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(v: usize, used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == cur.len() {
            out.push(cur.clone());
            return;
        }
        for grp in 0..=used.min(cur.len() - 1) {
            cur[v] = grp;
            rec(v + 1, used.max(grp + 1), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(0, 0, &mut cur, &mut out);
    out
}

/// Minimum imbalance over all set partitions, and the group count of the
/// first partition attaining it.
pub fn optimum(g: &SignedGraph) -> (f64, usize) {
    set_partitions(g.node_count())
        .into_iter()
        .map(|p| {
            let groups = p.iter().max().map_or(0, |m| m + 1);
            (imbalance(g, &p), groups)
        })
        .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Labels of a partition assignment in node order.
pub fn labels(assignment: &lensnet_core::Assignment) -> Vec<usize> {
    assignment.values().copied().collect()
}

/// Uniform index in `0..n`.
pub fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}
