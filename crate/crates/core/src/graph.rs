//! Undirected, weighted, signed graph of people.
//!
//! Nodes are stored in ascending [`NodeId`] order and every algorithm in the
//! crate iterates them in that order, so outputs are deterministic. Edges are
//! stored once per unordered pair with `u < v`; the weight of an edge is the
//! number of relationship records supporting it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Corpus person identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for NodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(NodeId)
    }
}

/// Parses a comma-separated id list such as `1384,1762`. Blank items are
/// skipped.
pub fn parse_id_list(s: &str) -> crate::Result<Vec<NodeId>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| crate::Error::InvalidArgument(format!("`{t}` is not a person id")))
        })
        .collect()
}

impl From<u64> for NodeId {
    fn from(id: u64) -> Self {
        NodeId(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Neutral,
}

impl Sign {
    /// Majority of record counts; a tie is neutral.
    pub fn from_counts(pos: u64, neg: u64) -> Sign {
        match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => Sign::Positive,
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Neutral,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Neutral => "0",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Sign> {
        match s.trim() {
            "+" => Some(Sign::Positive),
            "-" => Some(Sign::Negative),
            "0" => Some(Sign::Neutral),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Neutral => "neutral",
        })
    }
}

/// A person in the corpus. Also the node payload of a [`SignedGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub id: NodeId,
    pub name_cn: String,
    pub name_en: String,
    pub dynasty: Option<String>,
    pub birth_year: Option<i32>,
    pub death_year: Option<i32>,
}

impl Person {
    /// A person with only an id; the English name is `#<id>`.
    pub fn placeholder(id: NodeId) -> Person {
        Person {
            id,
            name_cn: String::new(),
            name_en: format!("#{id}"),
            dynasty: None,
            birth_year: None,
            death_year: None,
        }
    }
}

/// Raw relationship evidence for one relationship kind between a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub rel_code: String,
    pub rel_name: String,
    pub sign: Sign,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub sign: Sign,
    pub pos_count: u64,
    pub neg_count: u64,
    pub neu_count: u64,
    /// Per relationship kind, ordered by `rel_code`. May be empty for
    /// synthetic graphs; when present it sums to the counts above.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Evidence>,
}

impl SignedEdge {
    pub fn total(&self) -> u64 {
        self.pos_count + self.neg_count + self.neu_count
    }

    /// Number of supporting records, as a real weight.
    pub fn weight(&self) -> f64 {
        self.total() as f64
    }

    pub fn other(&self, end: NodeId) -> NodeId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }

    fn validate(&self) -> Result<()> {
        if self.u == self.v {
            return Err(Error::InvalidGraph(format!("self-loop on {}", self.u)));
        }
        if self.u > self.v {
            return Err(Error::InvalidGraph(format!(
                "edge ({}, {}) not canonical (u < v)",
                self.u, self.v
            )));
        }
        if self.total() == 0 {
            return Err(Error::InvalidGraph(format!(
                "edge ({}, {}) has zero weight",
                self.u, self.v
            )));
        }
        if self.sign != Sign::from_counts(self.pos_count, self.neg_count) {
            return Err(Error::InvalidGraph(format!(
                "edge ({}, {}) sign {} disagrees with counts +{}/-{}",
                self.u, self.v, self.sign, self.pos_count, self.neg_count
            )));
        }
        if !self.evidence.is_empty() {
            let mut sums = [0u64; 3];
            for e in &self.evidence {
                sums[sign_slot(e.sign)] += e.count;
            }
            if sums != [self.pos_count, self.neg_count, self.neu_count] {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) evidence does not sum to its counts",
                    self.u, self.v
                )));
            }
        }
        Ok(())
    }
}

fn sign_slot(sign: Sign) -> usize {
    match sign {
        Sign::Positive => 0,
        Sign::Negative => 1,
        Sign::Neutral => 2,
    }
}

/// Immutable signed graph. Internally nodes are addressed by a dense index
/// (position in ascending id order); the public API speaks [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    persons: Vec<Person>,
    index: HashMap<NodeId, usize>,
    edges: Vec<SignedEdge>,
    ends: Vec<(usize, usize)>,
    // (neighbor index, edge index), sorted by neighbor index
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Default for SignedGraph {
    fn default() -> Self {
        SignedGraph::empty()
    }
}

impl SignedGraph {
    pub fn empty() -> SignedGraph {
        SignedGraph {
            persons: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            ends: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    /// Validates and indexes a graph. Persons and edges may come in any order.
    pub fn new(mut persons: Vec<Person>, mut edges: Vec<SignedEdge>) -> Result<SignedGraph> {
        persons.sort_by_key(|p| p.id);
        if let Some(w) = persons.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidGraph(format!("duplicate node {}", w[0].id)));
        }
        let index: HashMap<NodeId, usize> =
            persons.iter().enumerate().map(|(i, p)| (p.id, i)).collect();

        edges.sort_by_key(|e| (e.u, e.v));
        if let Some(w) = edges.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::InvalidGraph(format!(
                "parallel edges between {} and {}",
                w[0].u, w[0].v
            )));
        }

        let mut missing = BTreeSet::new();
        let mut ends = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); persons.len()];
        for (k, e) in edges.iter().enumerate() {
            e.validate()?;
            match (index.get(&e.u), index.get(&e.v)) {
                (Some(&a), Some(&b)) => {
                    ends.push((a, b));
                    adjacency[a].push((b, k));
                    adjacency[b].push((a, k));
                }
                (a, b) => {
                    if a.is_none() {
                        missing.insert(e.u);
                    }
                    if b.is_none() {
                        missing.insert(e.v);
                    }
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::NotFound(missing.into_iter().collect()));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(SignedGraph {
            persons,
            index,
            edges,
            ends,
            adjacency,
        })
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.persons.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    /// Node ids in ascending order.
    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.persons.iter().map(|p| p.id)
    }

    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    pub fn person(&self, id: NodeId) -> Option<&Person> {
        self.index.get(&id).map(|&i| &self.persons[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    /// Edges ordered by `(u, v)`.
    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    /// The edge between `a` and `b`, in either argument order.
    pub fn edge(&self, a: NodeId, b: NodeId) -> Option<&SignedEdge> {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
            .map(|k| &self.edges[k])
    }

    pub fn neighbors(&self, id: NodeId) -> Result<Vec<NodeId>> {
        let i = self.require(id)?;
        Ok(self.adjacency[i]
            .iter()
            .map(|&(j, _)| self.persons[j].id)
            .collect())
    }

    pub fn degree(&self, id: NodeId) -> Result<usize> {
        self.require(id).map(|i| self.adjacency[i].len())
    }

    /// Graph restricted to `ids`, keeping every edge with both endpoints inside.
    pub fn induced_subgraph<I>(&self, ids: I) -> Result<SignedGraph>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let wanted: BTreeSet<NodeId> = ids.into_iter().collect();
        let missing: Vec<NodeId> = wanted
            .iter()
            .copied()
            .filter(|id| !self.contains(*id))
            .collect();
        if !missing.is_empty() {
            return Err(Error::NotFound(missing));
        }
        let persons: Vec<Person> = wanted
            .iter()
            .map(|id| self.persons[self.index[id]].clone())
            .collect();
        let edges: Vec<SignedEdge> = self
            .edges
            .iter()
            .filter(|e| wanted.contains(&e.u) && wanted.contains(&e.v))
            .cloned()
            .collect();
        SignedGraph::new(persons, edges)
    }

    // Dense-index accessors used by the algorithms.

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub(crate) fn require(&self, id: NodeId) -> Result<usize> {
        self.index_of(id).ok_or(Error::NotFound(vec![id]))
    }

    pub fn id_at(&self, i: usize) -> NodeId {
        self.persons[i].id
    }

    pub fn degree_at(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Neighbor indices of node `i`, ascending.
    pub fn neighbors_at(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(|&(j, _)| j)
    }

    /// `(neighbor index, edge)` pairs of node `i`.
    pub fn incident_at(&self, i: usize) -> impl Iterator<Item = (usize, &SignedEdge)> + '_ {
        self.adjacency[i].iter().map(|&(j, k)| (j, &self.edges[k]))
    }

    /// Edges with their dense endpoint indices.
    pub fn indexed_edges(&self) -> impl Iterator<Item = (usize, usize, &SignedEdge)> + '_ {
        self.ends
            .iter()
            .zip(&self.edges)
            .map(|(&(a, b), e)| (a, b, e))
    }
}

/// Incremental construction for synthetic graphs (tests, demos). Repeated
/// edges between the same pair accumulate their counts.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    persons: BTreeMap<NodeId, Person>,
    counts: BTreeMap<(NodeId, NodeId), [u64; 3]>,
}

impl GraphBuilder {
    pub fn node(mut self, id: impl Into<NodeId>) -> Self {
        let id = id.into();
        self.persons
            .entry(id)
            .or_insert_with(|| Person::placeholder(id));
        self
    }

    pub fn person(mut self, person: Person) -> Self {
        self.persons.insert(person.id, person);
        self
    }

    pub fn edge(self, a: impl Into<NodeId>, b: impl Into<NodeId>, sign: Sign, count: u64) -> Self {
        let (a, b) = (a.into(), b.into());
        let mut this = self.node(a).node(b);
        let key = if a <= b { (a, b) } else { (b, a) };
        this.counts.entry(key).or_default()[sign_slot(sign)] += count;
        this
    }

    pub fn positive(self, a: u64, b: u64) -> Self {
        self.edge(a, b, Sign::Positive, 1)
    }

    pub fn negative(self, a: u64, b: u64) -> Self {
        self.edge(a, b, Sign::Negative, 1)
    }

    pub fn neutral(self, a: u64, b: u64) -> Self {
        self.edge(a, b, Sign::Neutral, 1)
    }

    pub fn build(self) -> Result<SignedGraph> {
        let edges = self
            .counts
            .into_iter()
            .map(|((u, v), [p, n, z])| SignedEdge {
                u,
                v,
                sign: Sign::from_counts(p, n),
                pos_count: p,
                neg_count: n,
                neu_count: z,
                evidence: Vec::new(),
            })
            .collect();
        SignedGraph::new(self.persons.into_values().collect(), edges)
    }
}
