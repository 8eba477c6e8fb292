//! The three-part query answer: central people, direct relationships between
//! the seeds, and a group partition, all computed on one extracted subgraph.

use serde::{Deserialize, Serialize};

use crate::centrality::{self, CentralityOptions, CentralityRow, Measure};
use crate::error::{Error, Result};
use crate::graph::{Evidence, NodeId, Person, Sign, SignedGraph};
use crate::partition::{Partition, Strategy};
use crate::subgraph::{self, SeedQuery, DEFAULT_DEPTH_CAP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRelationshipReport {
    pub u: NodeId,
    pub v: NodeId,
    pub u_name: String,
    pub v_name: String,
    pub records: Vec<Evidence>,
    pub pos_total: u64,
    pub neg_total: u64,
    pub neu_total: u64,
    pub net_sign: Sign,
}

/// All recorded evidence between `a` and `b`. The pair is reported with the
/// smaller id first, so the answer does not depend on argument order.
pub fn pair_relationship(g: &SignedGraph, a: NodeId, b: NodeId) -> Result<PairRelationshipReport> {
    if a == b {
        return Err(Error::InvalidArgument(format!("pair needs two different people, got {a} twice")));
    }
    let missing: Vec<NodeId> = [a.min(b), a.max(b)].into_iter().filter(|id| !g.contains(*id)).collect();
    if !missing.is_empty() {
        return Err(Error::NotFound(missing));
    }
    let (u, v) = (a.min(b), a.max(b));
    let name = |id| g.person(id).map(|p: &Person| p.name_en.clone()).unwrap_or_default();
    let mut report = PairRelationshipReport {
        u,
        v,
        u_name: name(u),
        v_name: name(v),
        records: Vec::new(),
        pos_total: 0,
        neg_total: 0,
        neu_total: 0,
        net_sign: Sign::Neutral,
    };
    if let Some(e) = g.edge(u, v) {
        report.records = e.evidence.clone();
        report.pos_total = e.pos_count;
        report.neg_total = e.neg_count;
        report.neu_total = e.neu_count;
        report.net_sign = e.sign;
    }
    Ok(report)
}

fn default_top() -> usize {
    15
}
fn default_order() -> Measure {
    Measure::Degree
}
fn default_strategy() -> Strategy {
    Strategy::community()
}

/// Parameters of a report request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportQuery {
    pub seeds: Vec<NodeId>,
    #[serde(default)]
    pub depth: usize,
    #[serde(default = "default_strategy")]
    pub partition: Strategy,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_top")]
    pub top: usize,
    #[serde(default = "default_order")]
    pub order_by: Measure,
}

impl ReportQuery {
    pub fn new(seeds: Vec<NodeId>, depth: usize, partition: Strategy, seed: u64) -> ReportQuery {
        ReportQuery {
            seeds,
            depth,
            partition,
            seed,
            top: default_top(),
            order_by: default_order(),
        }
    }

    pub fn seed_query(&self) -> Result<SeedQuery> {
        SeedQuery::new(self.seeds.iter().copied(), self.depth)
    }
}

/// Guards applied when building a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub depth_cap: usize,
    /// Largest subgraph (in nodes) a report may analyze.
    pub node_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            depth_cap: DEFAULT_DEPTH_CAP,
            node_cap: 2_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub sign: Sign,
    pub weight: u64,
}

/// Just enough of the subgraph to draw it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphView {
    pub ball_sizes: Vec<usize>,
    pub nodes: Vec<Person>,
    pub edges: Vec<SubgraphEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralPart {
    pub order_by: Measure,
    pub eigenvector_converged: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<CentralityRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreePartReport {
    pub query: ReportQuery,
    pub subgraph: SubgraphView,
    pub central: CentralPart,
    pub pairs: Vec<PairRelationshipReport>,
    pub partition: Partition,
}

/// Seed subgraph after checking the depth cap and the node cap. Also returns
/// the ball sizes per expansion round.
pub fn guarded_subgraph(g: &SignedGraph, sq: &SeedQuery, limits: &Limits) -> Result<(SignedGraph, Vec<usize>)> {
    let sizes = subgraph::ball_sizes(g, sq, limits.depth_cap)?;
    let reached = *sizes.last().expect("at least round 0");
    check_node_cap(reached, limits)?;
    Ok((subgraph::extract_subgraph(g, sq, limits.depth_cap)?, sizes))
}

fn check_node_cap(nodes: usize, limits: &Limits) -> Result<()> {
    if nodes > limits.node_cap {
        return Err(Error::Guard(format!(
            "subgraph has {nodes} nodes, above the cap of {}",
            limits.node_cap
        )));
    }
    Ok(())
}

/// A partition request: a strategy, run on the seed subgraph when seeds are
/// given and on the whole graph otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionQuery {
    #[serde(default)]
    pub seeds: Vec<NodeId>,
    #[serde(default)]
    pub depth: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub strategy: Strategy,
}

pub fn partition_query(g: &SignedGraph, q: &PartitionQuery, limits: &Limits) -> Result<Partition> {
    if q.seeds.is_empty() {
        check_node_cap(g.node_count(), limits)?;
        return q.strategy.run(g, q.seed);
    }
    let sq = SeedQuery::new(q.seeds.iter().copied(), q.depth)?;
    let (sub, _) = guarded_subgraph(g, &sq, limits)?;
    q.strategy.run(&sub, q.seed)
}

/// Extracts the seed subgraph once, then computes the central-people table,
/// the seed-pair relationship reports and the partition on it.
pub fn three_part_report(g: &SignedGraph, q: &ReportQuery, limits: &Limits) -> Result<ThreePartReport> {
    let sq = q.seed_query()?;
    let (sub, sizes) = guarded_subgraph(g, &sq, limits)?;

    let cent = centrality::centrality_report(&sub, &CentralityOptions::default());
    let rows = centrality::top_central(&cent, q.top.max(1), q.order_by)?;

    let seeds: Vec<NodeId> = sq.seeds.iter().copied().collect();
    let mut pairs = Vec::new();
    for (i, &a) in seeds.iter().enumerate() {
        for &b in &seeds[i + 1..] {
            if sub.edge(a, b).is_some() {
                pairs.push(pair_relationship(&sub, a, b)?);
            }
        }
    }

    let partition = q.partition.run(&sub, q.seed)?;

    Ok(ThreePartReport {
        query: ReportQuery {
            seeds,
            ..q.clone()
        },
        subgraph: SubgraphView {
            ball_sizes: sizes,
            nodes: sub.persons().to_vec(),
            edges: sub
                .edges()
                .iter()
                .map(|e| SubgraphEdge {
                    u: e.u,
                    v: e.v,
                    sign: e.sign,
                    weight: e.total(),
                })
                .collect(),
        },
        central: CentralPart {
            order_by: q.order_by,
            eigenvector_converged: cent.eigenvector_converged,
            warnings: cent.warnings,
            rows,
        },
        pairs,
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::imbalance;

    fn g() -> SignedGraph {
        SignedGraph::builder()
            .edge(1, 2, Sign::Positive, 3)
            .edge(2, 1, Sign::Negative, 1)
            .edge(3, 1, Sign::Positive, 2)
            .node(4)
            .build()
            .unwrap()
    }

    #[test]
    fn pair_cases() {
        let p = pair_relationship(&g(), NodeId(1), NodeId(3)).unwrap();
        assert_eq!((p.pos_total, p.net_sign), (2, Sign::Positive));
        let p = pair_relationship(&g(), NodeId(2), NodeId(1)).unwrap();
        assert_eq!((p.pos_total, p.neg_total, p.net_sign), (3, 1, Sign::Positive));
        assert_eq!(p, pair_relationship(&g(), NodeId(1), NodeId(2)).unwrap());
        let p = pair_relationship(&g(), NodeId(1), NodeId(4)).unwrap();
        assert!(p.records.is_empty());
        assert_eq!(p.net_sign, Sign::Neutral);
        assert!(matches!(
            pair_relationship(&g(), NodeId(1), NodeId(9)),
            Err(Error::NotFound(_))
        ));
        assert!(pair_relationship(&g(), NodeId(1), NodeId(1)).is_err());
    }

    #[test]
    fn single_seed_report_is_trivial() {
        let q = ReportQuery::new(vec![NodeId(1)], 0, Strategy::community(), 0);
        let r = three_part_report(&g(), &q, &Limits::default()).unwrap();
        assert_eq!(r.subgraph.nodes.len(), 1);
        assert!(r.pairs.is_empty());
        assert_eq!(r.partition.group_count, 1);
        assert_eq!(r.central.rows.len(), 1);
    }

    #[test]
    fn unrelated_seeds_have_no_pairs() {
        let q = ReportQuery::new(vec![NodeId(4), NodeId(3)], 0, Strategy::community(), 0);
        let r = three_part_report(&g(), &q, &Limits::default()).unwrap();
        assert!(r.pairs.is_empty());
        assert_eq!(r.central.rows.len(), 2);
    }

    #[test]
    fn report_parts_share_the_subgraph() {
        let q = ReportQuery::new(vec![NodeId(2)], 1, Strategy::Greedy { groups: 2, restarts: 4 }, 5);
        let r = three_part_report(&g(), &q, &Limits::default()).unwrap();
        let ids: Vec<NodeId> = r.subgraph.nodes.iter().map(|p| p.id).collect();
        assert_eq!(ids, vec![NodeId(1), NodeId(2)]);
        assert_eq!(r.partition.assignment.keys().copied().collect::<Vec<_>>(), ids);
        let sub = g().induced_subgraph(ids).unwrap();
        assert_eq!(imbalance(&sub, &r.partition.assignment).unwrap(), r.partition.imbalance);
    }

    #[test]
    fn node_cap_is_enforced() {
        let q = ReportQuery::new(vec![NodeId(1)], 1, Strategy::community(), 0);
        let limits = Limits {
            node_cap: 2,
            ..Limits::default()
        };
        assert!(matches!(three_part_report(&g(), &q, &limits), Err(Error::Guard(_))));
    }

    #[test]
    fn partition_query_scopes() {
        let q: PartitionQuery = serde_json::from_str(r#"{"algorithm":"greedy","groups":2,"seed":4}"#).unwrap();
        assert_eq!(q.strategy, Strategy::Greedy { groups: 2, restarts: 16 });
        assert_eq!(partition_query(&g(), &q, &Limits::default()).unwrap().assignment.len(), 4);
        let q = PartitionQuery {
            seeds: vec![NodeId(3)],
            depth: 1,
            ..q
        };
        assert_eq!(partition_query(&g(), &q, &Limits::default()).unwrap().assignment.len(), 2);
        let tight = Limits {
            node_cap: 3,
            ..Limits::default()
        };
        assert!(matches!(
            partition_query(&g(), &PartitionQuery { seeds: vec![], ..q }, &tight),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn query_json_defaults() {
        let q: ReportQuery = serde_json::from_str(r#"{"seeds":[1,2]}"#).unwrap();
        assert_eq!(q.depth, 0);
        assert_eq!(q.partition, Strategy::community());
        assert_eq!((q.top, q.order_by), (15, Measure::Degree));
    }
}
