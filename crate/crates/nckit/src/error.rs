//! Error type and exit-code contract.

use thiserror::Error;

/// All failure modes of the toolkit.
///
/// Errors split into three categories mirroring the CLI exit codes:
/// input/validation problems (exit 1), numerical non-convergence (exit 2)
/// and violated mathematical preconditions (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("element is not hermitian: relative residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("element is not positive: minimal eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("bad pinching partition: {0}")]
    BadPartition(String),

    #[error("state is not faithful: minimal density eigenvalue {min_eigenvalue:.3e}")]
    NotFaithful { min_eigenvalue: f64 },

    #[error("supports do not commute: commutator norm {residual:.3e}")]
    NoncommutingSupports { residual: f64 },

    #[error("support condition violated: {0}")]
    SupportViolation(String),

    #[error("exponent must satisfy p >= 1, got {p}")]
    BadExponent { p: f64 },

    #[error("exponent mismatch: {left} vs {right}")]
    ExponentMismatch { left: f64, right: f64 },

    #[error("measure is not absolutely continuous at atom {atom}")]
    NotAbsolutelyContinuous { atom: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code contract: 1 input/validation, 2 numerical
    /// non-convergence, 3 mathematical precondition violated.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::AlgebraMismatch
            | Error::BadExponent { .. }
            | Error::ExponentMismatch { .. }
            | Error::InvalidInput(_)
            | Error::Io(_)
            | Error::Json(_) => 1,
            Error::NoConvergence(_) => 2,
            Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::BadPartition(_)
            | Error::NotFaithful { .. }
            | Error::NoncommutingSupports { .. }
            | Error::SupportViolation(_)
            | Error::NotAbsolutelyContinuous { .. } => 3,
        }
    }
}
