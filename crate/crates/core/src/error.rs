use thiserror::Error;

use crate::rank::Rank;

/// A text-format error with the (0-based) column where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} (column {column})")]
pub struct ParseError {
    pub message: String,
    pub column: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, column: usize) -> Self {
        ParseError { message: message.into(), column }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("node {0} is not materialized in the window")]
    UnknownNode(String),
    #[error("incidence error: {0}")]
    Incidence(String),
    #[error("no walk joins {0} and {1} within the window")]
    Unreachable(String, String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("construction error: {0}")]
    Construction(String),
    /// A check that the underlying theory guarantees has failed.
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn rank_above(rho: Rank, nu: Rank) -> Self {
        Error::Rank(format!("rank {rho} exceeds the graph rank {nu}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
