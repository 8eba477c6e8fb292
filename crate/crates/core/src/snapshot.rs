//! Versioned JSON persistence of a [`SignedGraph`].
//!
//! ```json
//! {
//!   "format": "lensnet-snapshot",
//!   "version": 1,
//!   "dynasty": "Song",
//!   "nodes": [{"id": 1762, "name_cn": "...", "name_en": "Wang Anshi", "dynasty": "Song",
//!              "birth_year": 1021, "death_year": 1086}],
//!   "edges": [{"u": 1384, "v": 1762, "weight": 4, "sign": "positive",
//!              "pos_count": 3, "neg_count": 1, "neu_count": 0,
//!              "evidence": [{"rel_code": "...", "rel_name": "...", "sign": "positive", "count": 3}]}]
//! }
//! ```
//!
//! Nodes are in ascending id order and edges in ascending `(u, v)` order, so
//! the same graph always serializes to the same bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Evidence, NodeId, Person, Sign, SignedEdge, SignedGraph};

pub const FORMAT: &str = "lensnet-snapshot";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format: String,
    pub version: u32,
    pub dynasty: Option<String>,
    pub nodes: Vec<Person>,
    pub edges: Vec<SnapshotEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: u64,
    pub sign: Sign,
    pub pos_count: u64,
    pub neg_count: u64,
    pub neu_count: u64,
    #[serde(default)]
    pub evidence: Vec<Evidence>,
}

impl Snapshot {
    pub fn from_graph(g: &SignedGraph, dynasty: Option<&str>) -> Snapshot {
        Snapshot {
            format: FORMAT.to_string(),
            version: VERSION,
            dynasty: dynasty.map(str::to_string),
            nodes: g.persons().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| SnapshotEdge {
                    u: e.u,
                    v: e.v,
                    weight: e.total(),
                    sign: e.sign,
                    pos_count: e.pos_count,
                    neg_count: e.neg_count,
                    neu_count: e.neu_count,
                    evidence: e.evidence.clone(),
                })
                .collect(),
        }
    }

    pub fn into_graph(self) -> Result<SignedGraph> {
        if self.format != FORMAT {
            return Err(Error::Snapshot(format!("unexpected format `{}`", self.format)));
        }
        if self.version != VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported version {} (expected {VERSION})",
                self.version
            )));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in self.edges {
            if e.weight != e.pos_count + e.neg_count + e.neu_count {
                return Err(Error::Snapshot(format!(
                    "edge ({}, {}): weight {} != sum of counts",
                    e.u, e.v, e.weight
                )));
            }
            edges.push(SignedEdge {
                u: e.u,
                v: e.v,
                sign: e.sign,
                pos_count: e.pos_count,
                neg_count: e.neg_count,
                neu_count: e.neu_count,
                evidence: e.evidence,
            });
        }
        SignedGraph::new(self.nodes, edges)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("snapshot serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Snapshot> {
        serde_json::from_str(text).map_err(|e| Error::Snapshot(format!("corrupt snapshot: {e}")))
    }
}

pub fn write_snapshot(path: &Path, g: &SignedGraph, dynasty: Option<&str>) -> Result<()> {
    fs::write(path, Snapshot::from_graph(g, dynasty).to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads and validates a snapshot; returns the graph and its dynasty tag.
pub fn read_snapshot(path: &Path) -> Result<(SignedGraph, Option<String>)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let snap = Snapshot::from_json(&text)?;
    let dynasty = snap.dynasty.clone();
    Ok((snap.into_graph()?, dynasty))
}
