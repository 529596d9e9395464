//! CLI-level error type: wraps library errors and adds config/IO failures.
//!
//! Exit-code contract: 0 success, 1 config or I/O error, 2 construction
//! failure, 3 verification failure, 4 numeric failure.

use expiry_pricer::PricingError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Pricing(#[from] PricingError),
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pricing(e) => e.exit_code(),
            CliError::Config(_) | CliError::Io(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
        assert_eq!(
            CliError::Pricing(PricingError::InvalidParameter("x".into())).exit_code(),
            1
        );
        assert_eq!(
            CliError::Pricing(PricingError::Construction { v: 0.5, reason: "x".into() })
                .exit_code(),
            2
        );
        assert_eq!(
            CliError::Pricing(PricingError::Verification("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::Pricing(PricingError::Numeric { reason: "x".into(), achieved: 1.0 })
                .exit_code(),
            4
        );
    }
}
