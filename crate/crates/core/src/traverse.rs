//! Breadth-first primitives over dense node indices.

use std::collections::VecDeque;

use crate::graph::SignedGraph;

pub const UNREACHED: usize = usize::MAX;

/// Hop distance from `src` to every node; [`UNREACHED`] where there is no path.
pub fn bfs_distances(g: &SignedGraph, src: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.node_count()];
    let mut queue = VecDeque::from([src]);
    dist[src] = 0;
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors_at(v) {
            if dist[w] == UNREACHED {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Component label per node, numbered in order of their smallest node index
/// (equivalently smallest NodeId).
pub fn components(g: &SignedGraph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut label = vec![UNREACHED; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != UNREACHED {
            continue;
        }
        label[s] = count;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for w in g.neighbors_at(v) {
                if label[w] == UNREACHED {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Runs `f` for every source index and collects results in source order.
pub(crate) fn per_source<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
