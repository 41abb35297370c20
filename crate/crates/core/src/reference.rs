//! Published reference values for the five benchmark tables (R = 2,
//! d = 2..5), loaded from `data/reference_tables.json`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::connection::ConnectionModel;
use crate::error::{RcmError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub dim: usize,
    pub system_size: f64,
    pub runs: u64,
    /// Simulated approximation of the critical intensity.
    pub estimate: f64,
    pub branching_bound: f64,
    /// Independent high-precision literature value, where one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub number: u32,
    pub title: String,
    pub model: ConnectionModel,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn row(&self, dim: usize) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.dim == dim)
    }
}

#[derive(Deserialize)]
struct TableFile {
    tables: Vec<ReferenceTable>,
}

const TABLES_JSON: &str = include_str!("../data/reference_tables.json");

pub fn reference_tables() -> &'static [ReferenceTable] {
    static TABLES: OnceLock<Vec<ReferenceTable>> = OnceLock::new();
    TABLES.get_or_init(|| {
        serde_json::from_str::<TableFile>(TABLES_JSON)
            .expect("embedded reference tables are valid JSON")
            .tables
    })
}

pub fn reference_table(number: u32) -> Result<&'static ReferenceTable> {
    reference_tables()
        .iter()
        .find(|t| t.number == number)
        .ok_or_else(|| RcmError::invalid("table", format!("table must be in 1..=5, got {number}")))
}

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exponent = x.abs().log10().floor() as i32;
    let shift = digits as i32 - 1 - exponent;
    if shift >= 0 {
        let scale = 10f64.powi(shift);
        (x * scale).round() / scale
    } else {
        let scale = 10f64.powi(-shift);
        (x / scale).round() * scale
    }
}

/// Whether `computed` rounds to `published` at `digits` significant digits.
pub fn matches_to_significant(computed: f64, published: f64, digits: u32) -> bool {
    let rounded = round_significant(computed, digits);
    (rounded - published).abs() <= 1e-9 * published.abs()
}
