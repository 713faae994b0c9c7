use thiserror::Error;

use crate::hypergraph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("invalid hypergraph: {0}")]
    InvalidGraph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("subgraph is not contained in the host graph: {0}")]
    NotSubgraph(String),

    #[error("instance too large for exhaustive check: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("no saturating matching exists: {0}")]
    NotSaturable(String),

    #[error("retries exhausted after {0} attempts")]
    RetriesExhausted(usize),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An invariant that the construction guarantees did not hold.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
