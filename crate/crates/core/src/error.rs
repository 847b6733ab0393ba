use thiserror::Error;

/// Errors raised by the engine.
///
/// Mathematical check failures that are expected outcomes (a violated
/// identity, a non-closed morphism) are reported through verification
/// reports, not through this type. `Error` is for inputs that cannot be
/// processed at all, and for self-checks that must never fail silently.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Shapes, indices, endpoints or references do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// An input violates an invariant the operation depends on (for
    /// example `d∘d ≠ 0` on a chain complex).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A computation would need data beyond the truncation level.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A block that must be invertible is singular.
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// A sign or orientation convention failed its mandatory self-check.
    #[error("convention error: {0}")]
    Convention(String),

    /// A construction failed the exact verification it is required to pass.
    #[error("verification failure: {0}")]
    Verification(String),

    /// Malformed input file.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Structural problems (bad input) as opposed to failed mathematics.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Structural(_) | Error::Parse { .. } | Error::Io(_) | Error::Truncation(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
