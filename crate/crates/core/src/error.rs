use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate edge ({source_id}, {target_id})")]
    DuplicateEdge { source_id: u64, target_id: u64 },

    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),

    #[error("edge ({source_id}, {target_id}) has non-positive or non-finite weight {weight}")]
    InvalidWeight { source_id: u64, target_id: u64, weight: f64 },

    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("vertex ids must be strictly increasing")]
    UnsortedIds,

    #[error("unknown motif `{0}`")]
    UnknownMotif(String),

    #[error("invalid motif specification: {0}")]
    InvalidSpec(String),

    #[error("graph has {n} vertices, above the brute-force oracle bound of {bound}")]
    OracleBound { n: usize, bound: usize },

    #[error("graph is not bipartite: edge ({source_id}, {target_id}) {reason}")]
    NotBipartite { source_id: u64, target_id: u64, reason: &'static str },

    #[error("row {0} has zero degree; restrict to the largest connected component first")]
    ZeroDegree(usize),

    #[error("largest connected component has {size} vertices but at least {required} are needed; try a weaker motif or functional closure")]
    ComponentTooSmall { size: usize, required: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("partitions share no commonly clustered nodes")]
    NoCommonNodes,

    #[error("partition part {0} has zero volume")]
    ZeroVolume(usize),

    #[error("similarity matrix is disconnected")]
    Disconnected,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
