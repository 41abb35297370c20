//! Radial connection functions with finite range and the per-pair
//! Bernoulli connection decision.

use std::io::Read;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{RcmError, Result};
use crate::geometry::{ball_volume, distance, unit_sphere_area};
use crate::quadrature;

/// Default absolute tolerance for the radial connectivity integral.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Largest exponent fed to `exp`; beyond it `1 - e^{-v}` is 1 in f64.
const MAX_EXPONENT: f64 = 745.0;

/// A radial connection function `φ(r)` vanishing beyond `range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ConnectionModel {
    /// `1{r <= R}`.
    Gilbert { range: f64 },
    /// `p · 1{r <= R}`.
    Penetrable { range: f64, p: f64 },
    /// `(1 - exp(-β R^n / r^n)) · 1{r <= R}`, equal to 1 at `r = 0`.
    SoftSphere { range: f64, beta: f64, hardness: u32 },
    /// Piecewise-linear `φ` on `0 = r_0 < … < r_k = R`.
    Tabulated {
        range: f64,
        radii: Vec<f64>,
        values: Vec<f64>,
    },
}

fn check_range(range: f64) -> Result<()> {
    if range.is_finite() && range > 0.0 {
        Ok(())
    } else {
        Err(RcmError::invalid(
            "range",
            format!("range must be finite and positive, got {range}"),
        ))
    }
}

impl ConnectionModel {
    pub fn gilbert(range: f64) -> Result<Self> {
        check_range(range)?;
        Ok(ConnectionModel::Gilbert { range })
    }

    pub fn penetrable(range: f64, p: f64) -> Result<Self> {
        check_range(range)?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(RcmError::invalid(
                "p",
                format!("connection probability must lie in (0, 1], got {p}"),
            ));
        }
        Ok(ConnectionModel::Penetrable { range, p })
    }

    pub fn soft_sphere(range: f64, beta: f64, hardness: u32) -> Result<Self> {
        check_range(range)?;
        if !(beta.is_finite() && beta > 0.0) {
            return Err(RcmError::invalid(
                "beta",
                format!("characteristic energy must be positive, got {beta}"),
            ));
        }
        if hardness < 1 {
            return Err(RcmError::invalid("hardness", "hardness must be a positive integer"));
        }
        Ok(ConnectionModel::SoftSphere { range, beta, hardness })
    }

    /// Builds a tabulated model; values are clamped to `[0, 1]` and the
    /// range is the last radius.
    pub fn tabulated(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(RcmError::Table(format!(
                "{} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.len() < 2 {
            return Err(RcmError::Table("need at least two grid points".into()));
        }
        if radii[0] != 0.0 {
            return Err(RcmError::Table(format!("first radius must be 0, got {}", radii[0])));
        }
        if radii.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(RcmError::Table("non-finite entry".into()));
        }
        if let Some(w) = radii.windows(2).find(|w| w[1] <= w[0]) {
            return Err(RcmError::Table(format!(
                "radii must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let range = *radii.last().expect("len >= 2");
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(ConnectionModel::Tabulated { range, radii, values })
    }

    /// Reads a two-column CSV `(r, phi)` with a header row.
    pub fn tabulated_from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(RcmError::Table(format!(
                    "row {} has {} columns, expected 2",
                    line + 1,
                    record.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| RcmError::Table(format!("row {}: cannot parse {s:?}: {e}", line + 1)))
            };
            radii.push(parse(&record[0])?);
            values.push(parse(&record[1])?);
        }
        Self::tabulated(radii, values)
    }

    pub fn tabulated_from_path(path: &Path) -> Result<Self> {
        Self::tabulated_from_csv(std::fs::File::open(path)?)
    }

    pub fn range(&self) -> f64 {
        match *self {
            ConnectionModel::Gilbert { range }
            | ConnectionModel::Penetrable { range, .. }
            | ConnectionModel::SoftSphere { range, .. }
            | ConnectionModel::Tabulated { range, .. } => range,
        }
    }

    /// Short descriptor such as `soft-sphere(R=2, beta=1, n=6)`.
    pub fn describe(&self) -> String {
        match self {
            ConnectionModel::Gilbert { range } => format!("gilbert(R={range})"),
            ConnectionModel::Penetrable { range, p } => format!("penetrable(R={range}, p={p})"),
            ConnectionModel::SoftSphere { range, beta, hardness } => {
                format!("soft-sphere(R={range}, beta={beta}, n={hardness})")
            }
            ConnectionModel::Tabulated { range, radii, .. } => {
                format!("tabulated(R={range}, {} knots)", radii.len())
            }
        }
    }

    /// `φ(r)` for `r >= 0`.
    pub fn phi_at(&self, r: f64) -> f64 {
        if r > self.range() {
            return 0.0;
        }
        match self {
            ConnectionModel::Gilbert { .. } => 1.0,
            ConnectionModel::Penetrable { p, .. } => *p,
            ConnectionModel::SoftSphere { range, beta, hardness } => {
                if r <= 0.0 {
                    return 1.0;
                }
                let exponent = (beta * (range / r).powi(*hardness as i32)).min(MAX_EXPONENT);
                -(-exponent).exp_m1()
            }
            ConnectionModel::Tabulated { radii, values, .. } => {
                let i = radii.partition_point(|&knot| knot <= r);
                if i == 0 {
                    return values[0];
                }
                if i == radii.len() {
                    return values[radii.len() - 1];
                }
                let (r0, r1) = (radii[i - 1], radii[i]);
                let t = (r - r0) / (r1 - r0);
                (values[i - 1] + t * (values[i] - values[i - 1])).clamp(0.0, 1.0)
            }
        }
    }

    /// Edge decision for a pair at distance `r` given a uniform `u` in `[0, 1)`.
    #[inline]
    pub fn connects(&self, r: f64, u: f64) -> bool {
        u < self.phi_at(r)
    }

    /// Decides whether `x` and `y` are joined, drawing one uniform only
    /// when they are within range.
    pub fn decide_connection<G: Rng + ?Sized>(&self, x: &[f64], y: &[f64], rng: &mut G) -> bool {
        self.decide_at_distance(distance(x, y), rng)
    }

    #[inline]
    pub(crate) fn decide_at_distance<G: Rng + ?Sized>(&self, r: f64, rng: &mut G) -> bool {
        if r > self.range() {
            return false;
        }
        let u: f64 = rng.random();
        self.connects(r, u)
    }

    /// `∫_{R^d} φ(|y|) dy`, the expected degree per unit intensity.
    pub fn effective_connectivity_mass(&self, d: u32, quad_tol: f64) -> Result<f64> {
        let sphere = unit_sphere_area(d)?;
        match self {
            ConnectionModel::Gilbert { range } => ball_volume(d, *range),
            ConnectionModel::Penetrable { range, p } => Ok(p * ball_volume(d, *range)?),
            ConnectionModel::SoftSphere { range, .. } => {
                let radial = quadrature::integrate(
                    |r| self.phi_at(r) * r.powi(d as i32 - 1),
                    0.0,
                    *range,
                    quad_tol / sphere,
                )?;
                Ok(sphere * radial.value)
            }
            ConnectionModel::Tabulated { radii, .. } => {
                // integrate knot to knot so the kinks sit on segment ends
                let per_segment = quad_tol / sphere / (radii.len() - 1) as f64;
                let mut total = 0.0;
                for w in radii.windows(2) {
                    let part =
                        quadrature::integrate(|r| self.phi_at(r) * r.powi(d as i32 - 1), w[0], w[1], per_segment)?;
                    total += part.value;
                }
                Ok(sphere * total)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn phi_examples() {
        let g = ConnectionModel::gilbert(2.0).unwrap();
        assert_eq!(g.phi_at(1.5), 1.0);
        assert_eq!(g.phi_at(2.0), 1.0);
        assert_eq!(g.phi_at(2.5), 0.0);
        let p = ConnectionModel::penetrable(2.0, 0.5).unwrap();
        assert_eq!(p.phi_at(2.0), 0.5);
        let s = ConnectionModel::soft_sphere(2.0, 1.0, 6).unwrap();
        assert!((s.phi_at(2.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((s.phi_at(2.0) - 0.632121).abs() < 1e-6);
        assert_eq!(s.phi_at(0.0), 1.0);
        assert_eq!(s.phi_at(1e-300), 1.0);
        assert_eq!(s.phi_at(2.0000001), 0.0);
    }

    #[test]
    fn constructor_validation() {
        assert!(ConnectionModel::gilbert(0.0).is_err());
        assert!(ConnectionModel::penetrable(2.0, 0.0).is_err());
        assert!(ConnectionModel::penetrable(2.0, 1.5).is_err());
        assert!(ConnectionModel::penetrable(2.0, 1.0).is_ok());
        assert!(ConnectionModel::soft_sphere(2.0, 1.0, 0).is_err());
        assert!(ConnectionModel::soft_sphere(2.0, -1.0, 6).is_err());
        let err = ConnectionModel::penetrable(2.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("`p`"));
    }

    #[test]
    fn tabulated_interpolates_and_clamps() {
        let t = ConnectionModel::tabulated(vec![0.0, 1.0, 3.0], vec![1.0, 0.5, 1.7]).unwrap();
        assert_eq!(t.range(), 3.0);
        assert_eq!(t.phi_at(0.0), 1.0);
        assert!((t.phi_at(0.5) - 0.75).abs() < 1e-15);
        assert!((t.phi_at(2.0) - 0.75).abs() < 1e-15);
        assert_eq!(t.phi_at(3.0), 1.0);
        assert_eq!(t.phi_at(3.01), 0.0);
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        assert!(ConnectionModel::tabulated(vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(ConnectionModel::tabulated(vec![0.5, 1.0], vec![1.0, 1.0]).is_err());
        assert!(ConnectionModel::tabulated(vec![0.0], vec![1.0]).is_err());
        assert!(ConnectionModel::tabulated(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn tabulated_csv() {
        let csv = "r,phi\n0,1\n1, 0.5\n2,0\n";
        let t = ConnectionModel::tabulated_from_csv(csv.as_bytes()).unwrap();
        assert_eq!(t.range(), 2.0);
        assert!((t.phi_at(1.5) - 0.25).abs() < 1e-15);
        assert!(ConnectionModel::tabulated_from_csv("r,phi\n0,x\n".as_bytes()).is_err());
        assert!(ConnectionModel::tabulated_from_csv("r,phi\n0,1,2\n1,1,1\n".as_bytes()).is_err());
    }

    #[test]
    fn decide_out_of_range_does_not_draw() {
        let g = ConnectionModel::penetrable(2.0, 0.5).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let b = a.clone();
        assert!(!g.decide_connection(&[0.0, 0.0], &[2.5, 0.0], &mut a));
        assert_eq!(a, b);
    }

    #[test]
    fn gilbert_in_range_always_connects() {
        let g = ConnectionModel::gilbert(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!((0..1000).all(|_| g.decide_connection(&[0.0, 0.0], &[1.0, 1.0], &mut rng)));
        assert!(g.connects(2.0, 0.999_999_999));
    }

    #[test]
    fn masses_for_closed_forms() {
        let g = ConnectionModel::gilbert(2.0).unwrap();
        let m = g.effective_connectivity_mass(2, DEFAULT_QUAD_TOL).unwrap();
        assert!((m - 4.0 * PI).abs() < 1e-12);
        assert!((1.0 / m - 0.079577).abs() < 5e-7);
        let p = ConnectionModel::penetrable(2.0, 0.5).unwrap();
        let m = p.effective_connectivity_mass(2, DEFAULT_QUAD_TOL).unwrap();
        assert!((m - 2.0 * PI).abs() < 1e-12);
        assert!((1.0 / m - 0.15915).abs() < 5e-6);
    }

    #[test]
    fn soft_sphere_mass() {
        let s = ConnectionModel::soft_sphere(2.0, 1.0, 6).unwrap();
        let m = s.effective_connectivity_mass(2, DEFAULT_QUAD_TOL).unwrap();
        assert!((1.0 / m - 0.084969).abs() < 5e-7, "got {}", 1.0 / m);
    }

    #[test]
    fn tabulated_step_matches_gilbert() {
        let t = ConnectionModel::tabulated(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 1.0]).unwrap();
        let g = ConnectionModel::gilbert(2.0).unwrap();
        for d in 1..=5 {
            let mt = t.effective_connectivity_mass(d, 1e-10).unwrap();
            let mg = g.effective_connectivity_mass(d, 1e-10).unwrap();
            assert!((mt - mg).abs() < 1e-9, "d={d}");
        }
        let zero = ConnectionModel::tabulated(vec![0.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(zero.effective_connectivity_mass(2, 1e-10).unwrap(), 0.0);
    }
}
