use thiserror::Error;

pub type Result<T> = std::result::Result<T, BcvError>;

/// Errors raised by the exact-binomial and survey machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BcvError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table lookup missed (no interpolation is attempted).
    #[error("lookup error: {0}")]
    Lookup(String),

    /// Malformed survey input.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: duplicate response for respondent `{respondent}` on item `{item}`")]
    Duplicate {
        line: u64,
        respondent: String,
        item: String,
    },

    #[error("line {line}: response `{token}` is not allowed on scale {scale}")]
    ScaleViolation { line: u64, token: String, scale: String },

    /// No substantive responses, so no binomial model exists for the item.
    #[error("item `{0}` has no substantive responses (N = 0)")]
    Undecidable(String),

    /// Inputs computed for different parameters were combined.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Two tables that should line up do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

impl BcvError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        BcvError::Domain(msg.into())
    }

    /// True for errors caused by malformed input data rather than bad arguments.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            BcvError::Parse { .. } | BcvError::Duplicate { .. } | BcvError::ScaleViolation { .. }
        )
    }
}
