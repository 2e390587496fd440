use thiserror::Error;

/// Errors produced by calibration, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DpError {
    /// A parameter or argument fell outside its admissible range.
    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A root-finding routine could not bracket or converge.
    #[error("no convergence in {routine}: {detail}")]
    Convergence {
        routine: &'static str,
        detail: String,
    },

    /// An internal consistency check failed; indicates a bug rather than bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl DpError {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        DpError::Domain {
            param,
            value,
            reason,
        }
    }

    /// Name of the offending parameter for [`DpError::Domain`], `None` otherwise.
    pub fn param(&self) -> Option<&'static str> {
        match self {
            DpError::Domain { param, .. } => Some(param),
            _ => None,
        }
    }
}

pub type Result<T, E = DpError> = std::result::Result<T, E>;

/// Rejects NaN and infinite arguments.
pub(crate) fn finite(param: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(DpError::domain(param, x, "must be a finite real"))
    }
}
