//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph ingestion, QUBO construction, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed edge list line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("negative edge weight {weight} on line {line}")]
    NegativeWeight { line: usize, weight: f64 },

    #[error("empty input: no edges found")]
    EmptyInput,

    #[error("graph has zero total edge weight")]
    ZeroTotalWeight,

    #[error("partition has {partition_len} entries but graph has {node_count} nodes")]
    PartitionMismatch {
        partition_len: usize,
        node_count: usize,
    },

    #[error("group id {group} out of range for k = {k}")]
    GroupOutOfRange { group: u32, k: u32 },

    #[error("node id {node} out of range for n = {n}")]
    NodeOutOfRange { node: u32, n: usize },

    #[error("group count k = {k} must be at least 2")]
    GroupCountTooSmall { k: u32 },

    #[error("problem size {dim} exceeds the cap of {cap} variables")]
    VariableCapExceeded { dim: usize, cap: usize },

    #[error("vector has {got} entries but problem dimension is {dim}")]
    DimensionMismatch { got: usize, dim: usize },

    #[error("non-binary entry {value} at index {index}")]
    NonBinaryEntry { index: usize, value: u8 },

    #[error("node {node} violates the one-hot constraint ({hot} groups selected)")]
    OneHotViolation { node: u32, hot: usize },

    #[error("({u}, {v}) is not an edge")]
    NotAnEdge { u: u32, v: u32 },

    #[error("coarsening mapping covers {mapping_len} nodes but partition has {partition_len}")]
    MappingMismatch {
        mapping_len: usize,
        partition_len: usize,
    },

    #[error("exact state dimension {dim} exceeds the cap of {cap} variables")]
    ExactDimCapExceeded { dim: usize, cap: usize },

    #[error("search space of {space:.3e} assignments exceeds the cap of {cap:.3e}")]
    SearchSpaceExceeded { space: f64, cap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed qubo file line {line}: {reason}")]
    MalformedQuboLine { line: usize, reason: String },

    #[error("dense modularity matrix refused for n = {n} (limit {limit})")]
    DenseLimitExceeded { n: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
