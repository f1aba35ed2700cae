//! Shared error type.

use alloc::string::String;

/// Errors produced by graph construction, game evaluation, and search.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: &'static str },
    #[error("graph is not a connected tree")]
    NotATree,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("need at least {min} nodes, got {n}")]
    TooFewNodes { min: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration cap is {cap} nodes, requested {n}")]
    EnumerationCapExceeded { n: usize, cap: usize },
    #[error("search budget exceeded after examining {examined} candidate moves")]
    SearchBudgetExceeded { examined: u64 },
    #[error("move is not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("unsupported concept for this graph family")]
    UnsupportedConceptForFamily,
    #[error("precondition not met: {0}")]
    PreconditionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}
