use thiserror::Error;

/// Errors raised by the simulator.
///
/// Configuration problems name the offending field so the CLI can surface
/// them verbatim.
#[derive(Debug, Error)]
pub enum RcmError {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("quadrature did not converge: estimated error {error_estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNonConvergence { error_estimate: f64, tolerance: f64 },

    #[error("connectivity mass is zero, so the branching bound is infinite")]
    InfiniteBranchingBound,

    #[error("no percolation found after {steps} ramp steps (last intensity {last_gamma})")]
    RampExhausted { steps: u32, last_gamma: f64 },

    #[error("tabulated connection function: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RcmError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        RcmError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, RcmError>;
