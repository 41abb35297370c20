//! Per-trial records and their JSON-lines / CSV encodings.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::threshold::Trial;

/// One completed exploration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Master seed of the run.
    pub seed: u64,
    /// Substream key the trial drew from.
    pub stream: u64,
    pub gamma: f64,
    pub escaped: bool,
    pub cluster_size: u64,
    pub generated_points: u64,
    pub steps: u64,
    pub max_norm: f64,
    pub capped: bool,
    pub wall_time_ms: f64,
}

impl TrialRecord {
    pub fn from_trial(trial: &Trial, seed: u64, gamma: f64) -> Self {
        let o = &trial.outcome;
        TrialRecord {
            trial: trial.index,
            seed,
            stream: trial.index,
            gamma,
            escaped: o.escaped,
            cluster_size: o.cluster_size,
            generated_points: o.generated_points,
            steps: o.steps,
            max_norm: o.max_norm,
            capped: o.capped,
            wall_time_ms: trial.wall_time_ms,
        }
    }
}

pub fn write_json_lines<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_json_lines<R: BufRead>(input: R) -> Result<Vec<TrialRecord>> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok(records)
}

/// Writes rows of any serializable struct as CSV with a header.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize().map(|r| r.map_err(Into::into)).collect()
}
