use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum VgeomError {
    /// A constructor or operation received an argument outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A kernel row failed stochasticity validation.
    #[error("kernel row {index} is not a probability law: {detail}")]
    BadRow { index: usize, detail: String },

    /// A truncation or window is too small for the requested exact computation.
    #[error("truncation too small: {detail}; required M >= {required}")]
    TruncationTooSmall { detail: String, required: usize },

    /// An iterative routine failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A model does not support the requested closed-form quantity.
    #[error("unsupported for this model: {0}")]
    Unsupported(String),

    /// A numeric invariant that the theory guarantees was violated at runtime.
    #[error("numeric invariant violated: {0}")]
    InvariantViolated(String),

    /// Serialization or I/O failure while writing reports.
    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, VgeomError>;

impl VgeomError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        VgeomError::InvalidArgument(msg.into())
    }
}
