use thiserror::Error;

/// Errors raised by graph construction, samplers, decompositions and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no edges")]
    NoEdges,

    #[error("{what}: size {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("retry limit of {limit} exceeded in {what}")]
    RetryLimit { what: &'static str, limit: u64 },

    #[error("degree sum {0} is odd")]
    OddDegreeSum(u64),

    #[error("no red edge left to strip")]
    NoRedEdge,

    #[error("reduced core is empty")]
    EmptyReducedCore,

    #[error("trimmed core is empty")]
    EmptyTrimmedCore,

    #[error("iterative solver did not converge: {0}")]
    NotConverged(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
