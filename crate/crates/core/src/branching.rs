//! Branching lower bounds on the critical intensity and the constant-`g`
//! subcriticality certificate.
//!
//! With `q = γ ∫φ`, the choice `g ≡ q / (1 − q)` satisfies
//! `q (1 + g) <= g` whenever `q < 1`, which certifies a finite cluster with
//! mean size at most `1 + g = 1 / (1 − q)`.

use serde::{Deserialize, Serialize};

use crate::connection::{ConnectionModel, DEFAULT_QUAD_TOL};
use crate::error::{RcmError, Result};
use crate::reference::round_significant;

/// `1 / ∫φ`, the intensity at which the expected offspring number is one.
pub fn branching_bound(model: &ConnectionModel, d: u32) -> Result<f64> {
    let mass = model.effective_connectivity_mass(d, DEFAULT_QUAD_TOL)?;
    if mass <= 0.0 {
        return Err(RcmError::InfiniteBranchingBound);
    }
    Ok(1.0 / mass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingReport {
    pub model: ConnectionModel,
    pub dim: u32,
    /// `∫φ` per unit intensity.
    pub connectivity_mass: f64,
    /// `None` when the mass is zero.
    pub branching_bound: Option<f64>,
    /// `branching_bound` at five significant digits, as tables quote it.
    pub branching_bound_5sig: Option<f64>,
    pub gamma: f64,
    /// `γ ∫φ`.
    pub q: f64,
    pub certificate_valid: bool,
    pub g: Option<f64>,
    pub mean_cluster_bound: Option<f64>,
    /// `g − q (1 + g)`; non-negative up to rounding for a valid certificate.
    pub residual: Option<f64>,
}

/// Checks the constant-`g` condition at intensity `gamma`. An invalid
/// certificate only means this sufficient condition fails.
pub fn constant_g_certificate(model: &ConnectionModel, d: u32, gamma: f64) -> Result<BranchingReport> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(RcmError::invalid(
            "gamma",
            format!("intensity must be finite and >= 0, got {gamma}"),
        ));
    }
    let mass = model.effective_connectivity_mass(d, DEFAULT_QUAD_TOL)?;
    let q = gamma * mass;
    let valid = q < 1.0;
    let (g, bound, residual) = if valid {
        let g = q / (1.0 - q);
        (Some(g), Some(1.0 / (1.0 - q)), Some(g - q * (1.0 + g)))
    } else {
        (None, None, None)
    };
    let bound_exact = (mass > 0.0).then(|| 1.0 / mass);
    Ok(BranchingReport {
        model: model.clone(),
        dim: d,
        connectivity_mass: mass,
        branching_bound: bound_exact,
        branching_bound_5sig: bound_exact.map(|b| round_significant(b, 5)),
        gamma,
        q,
        certificate_valid: valid,
        g,
        mean_cluster_bound: bound,
        residual,
    })
}
