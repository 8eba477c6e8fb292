use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id(s): {}", join_ids(.0))]
    NotFound(Vec<NodeId>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: header mismatch: expected `{expected}`, found `{found}`", path.display())]
    Header {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("{}:{line}: duplicate {what} `{key}`", path.display())]
    Duplicate {
        path: PathBuf,
        line: usize,
        what: &'static str,
        key: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A size or depth guard refused the request.
    #[error("refused: {0}")]
    Guard(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line and the HTTP error body.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotFound(_) => "not_found",
            Error::Io { .. } => "io",
            Error::Header { .. } => "header",
            Error::Duplicate { .. } => "duplicate",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Guard(_) => "guard",
            Error::Contract(_) => "contract",
            Error::Numeric(_) => "numeric",
            Error::Snapshot(_) => "snapshot",
            Error::Json(_) => "json",
        }
    }
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter()
        .map(|id| id.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
