//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by geometric and algebraic operations.
///
/// `Structure` is reserved for failures that indicate an internal
/// inconsistency (a bug or corrupted structure data), the other variants
/// report misuse of an operation.
#[derive(Debug, Error)]
pub enum GeomError {
    /// Operands live on spaces of different dimension.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An operation was applied to a form of unsupported degree.
    #[error("degree error: {0}")]
    Degree(String),

    /// A metric was degenerate or not positive where positivity is required.
    #[error("metric error: {0}")]
    Metric(String),

    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Construction or verification of structure data failed.
    #[error("structure error: {0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
