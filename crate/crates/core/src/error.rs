use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Validation failures (`InvalidParameter`, `OutsideDomain`) are distinguished
/// from numerical failures so the experiment runner can map them onto
/// different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point outside the admissible domain: {0}")]
    OutsideDomain(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last residual {residual:.3e}); check the Lipschitz scale L")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("resolvent singular at z = {z}: point lies (numerically) in the spectrum")]
    NearSpectrum { z: Complex64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that stem from violated preconditions rather than
    /// from a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::OutsideDomain(_) | Error::Parse(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
