use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or non-finite input.
    #[error("invalid input: {0}")]
    Input(String),

    /// The boundary grid cannot hold the requested representation.
    #[error("representation error: {0}")]
    Representation(String),

    /// Two operands disagree on something they must share (e.g. grid size).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A kernel or metric was evaluated at (or numerically at) its pole.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The sampled recursion left H² beyond tolerance.
    #[error("numerical degradation: {0}")]
    NumericalDegradation(String),

    /// The reduced remainder is identically zero; no pole can be selected.
    #[error("nothing to select: remainder norm {norm:e} is below threshold")]
    NothingToSelect { norm: f64 },

    /// Operation precondition not met.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
