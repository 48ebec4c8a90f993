use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("numeric error: {reason} (dim {dim}, iterations {iterations})")]
    Numeric {
        reason: String,
        dim: usize,
        iterations: usize,
    },
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl SpecError {
    pub fn domain(msg: impl Into<String>) -> Self {
        SpecError::Domain(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        SpecError::Shape(msg.into())
    }

    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, SpecError::Domain(_) | SpecError::Shape(_))
    }
}

pub type Result<T> = std::result::Result<T, SpecError>;
