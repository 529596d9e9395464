//! Error taxonomy for the solver pipeline.
//!
//! Variants map one-to-one onto the CLI exit codes: parameter/config problems
//! (exit 1), equilibrium-construction failures (exit 2), verification
//! failures (exit 3), and numeric failures such as quadrature non-convergence
//! (exit 4).

use thiserror::Error;

/// Unified error type for schedule validation, equilibrium construction,
/// verification, and numeric evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum PricingError {
    /// A schedule/market/config parameter is outside its validity range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The equilibrium construction aborted (ODE singularity, non-monotone
    /// numerical solution, ...). Carries the offending valuation when known.
    #[error("construction failed at v={v}: {reason}")]
    Construction { v: f64, reason: String },

    /// A verification-level failure surfaced as an error (e.g. a frontier
    /// with no verified point to optimize over).
    #[error("verification failed: {0}")]
    Verification(String),

    /// A numeric routine did not meet its tolerance. Carries the best
    /// estimate achieved so the caller can still report it.
    #[error("numeric failure: {reason} (achieved estimate {achieved})")]
    Numeric { reason: String, achieved: f64 },
}

impl PricingError {
    /// CLI exit code associated with this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            PricingError::InvalidParameter(_) => 1,
            PricingError::Construction { .. } => 2,
            PricingError::Verification(_) => 3,
            PricingError::Numeric { .. } => 4,
        }
    }
}
