//! Analysis engine for signed, weighted social networks of historical people.
//!
//! The pipeline: [`ingest`] reads a biographical corpus and builds a
//! [`SignedGraph`] per dynasty, [`snapshot`] persists it, [`stats`] and
//! [`centrality`] describe it, [`subgraph`] cuts out the neighborhood of a
//! seed set, [`partition`] splits people into camps by minimizing signed
//! imbalance (or maximizing signed modularity), and [`report`] assembles the
//! three-part answer served by the CLI and the HTTP service.

pub mod centrality;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod ingest;
pub mod json;
pub mod partition;
pub mod report;
pub mod snapshot;
pub mod stats;
pub mod subgraph;
pub mod traverse;

pub use error::{Error, Result};
pub use graph::{parse_id_list, Evidence, GraphBuilder, NodeId, Person, Sign, SignedEdge, SignedGraph};
pub use partition::{Algorithm, Assignment, Objective, Partition, Strategy};
pub use report::{Limits, PartitionQuery, ReportQuery, ThreePartReport};
pub use subgraph::SeedQuery;
