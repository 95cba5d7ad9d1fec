//! Error type shared across the crate.

use crate::variant::Variant;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A scalar argument violates its domain (negative eigenvalue, nu <= 0, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A computation received or produced a non-finite value.
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// Vector/matrix sizes do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A subdomain solve hit a vanishing denominator or a singular system.
    #[error("singular step: {0}")]
    SingularStep(String),

    /// The requested operation is not defined for this variant.
    #[error("variant {variant} is not supported by {operation}")]
    UnsupportedVariant {
        variant: Variant,
        operation: &'static str,
    },

    /// Wrong number of relaxation parameters or transmission unknowns.
    #[error("variant {variant} expects {expected}, got {got}")]
    ArityMismatch {
        variant: Variant,
        expected: &'static str,
        got: &'static str,
    },

    /// The derivative-free search exhausted its evaluation budget.
    #[error("optimizer did not converge within {evaluations} evaluations")]
    OptimizerStalled { evaluations: usize },

    /// Failures collected from independent per-mode runs.
    #[error("{} of {total} modes failed; first: {first}", failures.len())]
    ModeFailures {
        total: usize,
        failures: Vec<(usize, String)>,
        first: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
