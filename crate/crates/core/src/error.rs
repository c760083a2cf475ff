use std::io;

use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) appears with conflicting weights {first} and {second}")]
    DuplicateEdge {
        u: VertexId,
        v: VertexId,
        first: f64,
        second: f64,
    },

    #[error("edge ({u}, {v}) has invalid weight {weight}; weights must be finite and positive")]
    InvalidWeight { u: VertexId, v: VertexId, weight: f64 },

    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),

    #[error("conductance is undefined for the empty set or the full vertex set")]
    EmptyOrFullSet,

    #[error("vertex set has zero volume")]
    ZeroVolume,

    #[error("vertex {0} has zero degree")]
    ZeroDegreeVertex(VertexId),

    #[error("seed vertex {0} has zero degree")]
    ZeroDegreeSeed(VertexId),

    #[error("cannot sweep an empty vector")]
    EmptySupport,

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("malformed line at byte offset {offset}: {reason}")]
    MalformedLine { offset: u64, reason: String },

    #[error("line {line}: node id {id} is not greater than the previous node id {previous}")]
    UnsortedNodeIds {
        line: u64,
        id: VertexId,
        previous: VertexId,
    },

    #[error("line {line}: edge ({u}, {v}) appears with conflicting weights {first} and {second}")]
    ConflictingWeight {
        line: u64,
        u: VertexId,
        v: VertexId,
        first: f64,
        second: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("graph too large: {0}")]
    Overflow(String),

    #[error("{path}: file not found")]
    FileNotFound { path: String },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }

    /// True for malformed-input errors, as opposed to I/O or usage problems.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::MalformedLine { .. }
                | Error::UnsortedNodeIds { .. }
                | Error::ConflictingWeight { .. }
                | Error::DuplicateEdge { .. }
                | Error::InvalidWeight { .. }
        )
    }
}
