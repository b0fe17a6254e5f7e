use thiserror::Error;

/// Errors raised by the solver pipeline.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit index {0} out of range (register has 2 qubits)")]
    InvalidQubit(usize),
    #[error("shot count must be at least 1 for sampled measurement")]
    ZeroShots,
    #[error("probability vector is invalid: {0}")]
    InvalidProbabilities(&'static str),
    #[error("collocation grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("collocation grid is invalid: {0}")]
    InvalidGrid(&'static str),
    #[error("layer sizes are invalid: {0}")]
    InvalidLayerSizes(&'static str),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("batch is empty")]
    EmptyBatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Diverged { epoch: usize, loss: f64 },
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
