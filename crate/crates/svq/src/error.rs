//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, evaluation, and training operations.
#[derive(Debug, Error)]
pub enum SvqError {
    /// A vector or matrix argument has the wrong length for its context.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Stage `stage` does not accept the previous stage's posterior vector.
    #[error(
        "invalid chain linking: stage {stage} expects input dimension {expected}, \
         previous stage produces {actual}"
    )]
    InvalidLinking {
        stage: usize,
        expected: usize,
        actual: usize,
    },

    /// An operation that averages over a dataset received an empty one.
    #[error("dataset is empty")]
    EmptyDataset,

    /// A snapshot sink failed while training was writing to it.
    #[error("snapshot sink failure: {0}")]
    SnapshotSink(#[from] std::io::Error),
}

impl SvqError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SvqError::InvalidArgument(msg.into())
    }
}
