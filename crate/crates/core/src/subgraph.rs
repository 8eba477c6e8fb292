//! Seed-centered subgraph extraction: grow the seed set frontier by frontier
//! `depth` times, then take the induced subgraph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedGraph};

/// Depths at or above this reach most of a small-world network.
pub const DEFAULT_DEPTH_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedQuery {
    pub seeds: BTreeSet<NodeId>,
    pub depth: usize,
}

impl SeedQuery {
    pub fn new(seeds: impl IntoIterator<Item = NodeId>, depth: usize) -> Result<SeedQuery> {
        let seeds: BTreeSet<NodeId> = seeds.into_iter().collect();
        if seeds.is_empty() {
            return Err(Error::InvalidArgument("seed set is empty".into()));
        }
        Ok(SeedQuery { seeds, depth })
    }

    /// Checks seeds against `g` and the depth against `depth_cap`.
    pub fn validate(&self, g: &SignedGraph, depth_cap: usize) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("seed set is empty".into()));
        }
        let missing: Vec<NodeId> = self.seeds.iter().copied().filter(|s| !g.contains(*s)).collect();
        if !missing.is_empty() {
            return Err(Error::NotFound(missing));
        }
        if self.depth > depth_cap {
            return Err(Error::Guard(format!(
                "depth {} exceeds cap {depth_cap}; raise the cap (--depth-cap) to allow it",
                self.depth
            )));
        }
        Ok(())
    }
}

/// Node sets after each expansion round, in dense indices. Round 0 is the
/// seeds; each later round adds the unseen neighbors of the previous frontier.
fn expand(g: &SignedGraph, q: &SeedQuery) -> (Vec<bool>, Vec<usize>) {
    let mut inside = vec![false; g.node_count()];
    let mut frontier: Vec<usize> = q.seeds.iter().map(|&s| g.index_of(s).expect("validated seed")).collect();
    for &i in &frontier {
        inside[i] = true;
    }
    let mut sizes = vec![frontier.len()];
    for _ in 0..q.depth {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in g.neighbors_at(v) {
                if !inside[w] {
                    inside[w] = true;
                    next.push(w);
                }
            }
        }
        sizes.push(sizes.last().unwrap() + next.len());
        frontier = next;
    }
    (inside, sizes)
}

pub fn extract_subgraph(g: &SignedGraph, q: &SeedQuery, depth_cap: usize) -> Result<SignedGraph> {
    q.validate(g, depth_cap)?;
    let (inside, _) = expand(g, q);
    g.induced_subgraph((0..g.node_count()).filter(|&i| inside[i]).map(|i| g.id_at(i)))
}

/// `|V_sub|` after rounds `0..=depth`.
pub fn ball_sizes(g: &SignedGraph, q: &SeedQuery, depth_cap: usize) -> Result<Vec<usize>> {
    q.validate(g, depth_cap)?;
    Ok(expand(g, q).1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{star, triangle};

    fn ids(g: &SignedGraph) -> Vec<u64> {
        g.node_ids().map(|n| n.0).collect()
    }

    fn q(seeds: &[u64], depth: usize) -> SeedQuery {
        SeedQuery::new(seeds.iter().map(|&s| NodeId(s)), depth).unwrap()
    }

    #[test]
    fn path_depth_one() {
        let g = SignedGraph::builder()
            .positive(1, 2)
            .positive(2, 3)
            .negative(3, 4)
            .build()
            .unwrap();
        let sub = extract_subgraph(&g, &q(&[1], 1), DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(ids(&sub), vec![1, 2]);
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn depth_zero_is_induced_on_seeds() {
        let sub = extract_subgraph(&triangle(), &q(&[1, 3], 0), DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(ids(&sub), vec![1, 3]);
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn isolated_seed_survives() {
        let g = SignedGraph::builder().positive(1, 2).node(5).build().unwrap();
        let sub = extract_subgraph(&g, &q(&[5, 1], 2), DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(ids(&sub), vec![1, 2, 5]);
    }

    #[test]
    fn ball_sizes_cases() {
        assert_eq!(ball_sizes(&star(3), &q(&[0], 1), 4).unwrap(), vec![1, 4]);
        assert_eq!(ball_sizes(&star(3), &q(&[1, 2], 0), 4).unwrap(), vec![2]);
        assert_eq!(ball_sizes(&star(3), &q(&[1], 3), 4).unwrap(), vec![1, 2, 4, 4]);
    }

    #[test]
    fn errors() {
        assert!(SeedQuery::new([], 0).is_err());
        let err = extract_subgraph(&triangle(), &q(&[1, 9], 0), 4).unwrap_err();
        assert!(matches!(err, Error::NotFound(ref v) if v == &[NodeId(9)]));
        let err = extract_subgraph(&triangle(), &q(&[1], 5), 4).unwrap_err();
        assert!(matches!(err, Error::Guard(_)));
        assert!(extract_subgraph(&triangle(), &q(&[1], 5), 6).is_ok());
    }
}
