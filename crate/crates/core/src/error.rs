use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative weight {weight} on edge ({src}, {dst})")]
    NegativeWeight { src: usize, dst: usize, weight: f64 },

    #[error("non-finite weight on edge ({src}, {dst})")]
    NonFiniteWeight { src: usize, dst: usize },

    #[error("node id {node} out of range for {n} nodes")]
    NodeIdOutOfRange { node: usize, n: usize },

    #[error("duplicate edge ({src}, {dst})")]
    DuplicateEdge { src: usize, dst: usize },

    #[error("node {0} has zero out-degree")]
    DanglingNode(usize),

    #[error("weight matrix is not symmetric")]
    AsymmetricInput,

    #[error("node {node} cannot reach any labeled node")]
    NotLabelConnected { node: usize },

    #[error("no labeled nodes")]
    NoLabeledNodes,

    #[error("invalid label matrix: {0}")]
    InvalidLabels(String),

    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("injection value {value} at node {node} outside [0, 1]")]
    InjectionOutOfRange { node: usize, value: f64 },

    #[error("no node has continuation probability below 1; the walk never terminates")]
    NonTerminatingWalk,

    #[error("singular system (pivot {pivot:e} at column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("matrix is defective (eigenvalue {0} lacks a full eigenspace)")]
    DefectiveMatrix(f64),

    #[error("random walk from node {start} exceeded {cap} steps")]
    WalkLengthCap { start: usize, cap: usize },

    #[error("{solver} solver not available: {reason}")]
    UnsupportedSolver {
        solver: &'static str,
        reason: String,
    },

    #[error("direct solve needs n <= {threshold}, graph has {n} nodes")]
    DenseThresholdExceeded { n: usize, threshold: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("point set needs at least two points")]
    EmptyPointSet,

    #[error("sigma^2 must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("k = {k} must satisfy 1 <= k < n = {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("partitions must be a disjoint cover of the nodes: {0}")]
    InvalidPartition(String),

    #[error("holdout would withhold every labeled node")]
    AllLabelsWithheld,

    #[error("block {0} is empty")]
    DegenerateBlock(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("node {0} has zero total label weight")]
    ZeroMassRow(usize),

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through line annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures of the numerics (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::SingularSystem { .. }
                | Error::EigensolverFailure(_)
                | Error::DefectiveMatrix(_)
                | Error::WalkLengthCap { .. }
                | Error::NonTerminatingWalk
                | Error::NotLabelConnected { .. }
        )
    }
}
