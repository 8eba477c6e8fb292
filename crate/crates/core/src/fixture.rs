//! The bundled Eight Masters fixture corpus (see `fixtures/eight_masters`).

use std::path::Path;

use crate::error::Result;
use crate::graph::{NodeId, SignedGraph};
use crate::ingest::{self, BuildOptions, BuildSummary};

pub const PERSONS_TSV: &str = include_str!("../fixtures/eight_masters/persons.tsv");
pub const RELATIONS_TSV: &str = include_str!("../fixtures/eight_masters/relations.tsv");
pub const SIGN_RULES_TSV: &str = include_str!("../fixtures/eight_masters/sign_rules.tsv");

pub const OUYANG_XIU: NodeId = NodeId(1384);
pub const WANG_ANSHI: NodeId = NodeId(1762);
pub const SU_SHI: NodeId = NodeId(3767);
pub const ZENG_GONG: NodeId = NodeId(20001);
pub const SU_ZHE: NodeId = NodeId(20002);
pub const SU_XUN: NodeId = NodeId(20003);

/// The six masters, in ascending id order.
pub const SIX_MASTERS: [NodeId; 6] = [OUYANG_XIU, WANG_ANSHI, SU_SHI, ZENG_GONG, SU_ZHE, SU_XUN];

/// Fixture directory inside this crate, for callers that need real files.
pub fn fixture_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/eight_masters"))
}

/// Builds the Song-dynasty fixture graph from the embedded TSV text.
pub fn song_graph() -> Result<(SignedGraph, BuildSummary)> {
    let (persons, _) = ingest::parse_persons(PERSONS_TSV, Path::new("persons.tsv"))?;
    let (relations, _) = ingest::parse_relations(RELATIONS_TSV, Path::new("relations.tsv"))?;
    let (rules, _) = ingest::parse_rules(SIGN_RULES_TSV, Path::new("sign_rules.tsv"))?;
    let opts = BuildOptions {
        dynasty: Some("Song".into()),
        spans: ingest::default_dynasties(),
        exclude: Default::default(),
    };
    ingest::build_graph(&persons, &relations, &rules, &opts)
}
