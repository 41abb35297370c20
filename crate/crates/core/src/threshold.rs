//! Percolation verdicts over repeated explorations and the geometric-ramp
//! plus bisection search for the critical intensity.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branching::branching_bound;
use crate::connection::ConnectionModel;
use crate::error::{RcmError, Result};
use crate::exploration::{explore_cluster, ClusterOutcome, SimParams};
use crate::sampling::RngStream;

/// Aggregate of `runs` explorations at one intensity. The run percolates
/// as soon as a single exploration escapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercolationVerdict {
    pub gamma: f64,
    /// Explorations actually counted.
    pub runs: u64,
    pub escapes: u64,
    pub contained: u64,
    pub capped_runs: u64,
    pub percolates: bool,
}

impl PercolationVerdict {
    /// Capped runs make a non-percolating verdict untrustworthy.
    pub fn unreliable(&self) -> bool {
        self.capped_runs > 0
    }

    fn from_outcomes<'a>(gamma: f64, outcomes: impl Iterator<Item = &'a ClusterOutcome>) -> Self {
        let mut v = PercolationVerdict {
            gamma,
            runs: 0,
            escapes: 0,
            contained: 0,
            capped_runs: 0,
            percolates: false,
        };
        for o in outcomes {
            v.runs += 1;
            if o.escaped {
                v.escapes += 1;
            } else if o.capped {
                v.capped_runs += 1;
            } else {
                v.contained += 1;
            }
        }
        v.percolates = v.escapes > 0;
        v
    }
}

/// One exploration with its trial index and wall time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub index: u64,
    pub outcome: ClusterOutcome,
    pub wall_time_ms: f64,
}

/// Runs trials `0..trials` on the current rayon pool; trial `i` uses
/// stream `i` of `master_seed`. Results come back in index order.
pub fn run_trials(params: &SimParams, model: &ConnectionModel, trials: u64, master_seed: u64) -> Result<Vec<Trial>> {
    params.validate(model)?;
    (0..trials)
        .into_par_iter()
        .map(|index| {
            let start = Instant::now();
            let mut rng = RngStream::new(master_seed, index);
            let outcome = explore_cluster(params, model, &mut rng)?;
            Ok(Trial {
                index,
                outcome,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

/// Runs up to `runs` explorations at `params.gamma` in parallel.
///
/// With `early_exit`, trials after the lowest-indexed escape are skipped
/// and the verdict counts trials `0..=k` for that escape index `k`, so the
/// result does not depend on scheduling.
pub fn percolation_verdict(
    params: &SimParams,
    model: &ConnectionModel,
    runs: u64,
    master_seed: u64,
    early_exit: bool,
) -> Result<PercolationVerdict> {
    if runs == 0 {
        return Err(RcmError::invalid("runs", "need at least one run"));
    }
    params.validate(model)?;
    let first_escape = AtomicU64::new(u64::MAX);
    let outcomes: Vec<Option<ClusterOutcome>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            if early_exit && i > first_escape.load(Ordering::Relaxed) {
                return Ok(None);
            }
            let mut rng = RngStream::new(master_seed, i);
            let outcome = explore_cluster(params, model, &mut rng)?;
            if outcome.escaped {
                first_escape.fetch_min(i, Ordering::Relaxed);
            }
            Ok(Some(outcome))
        })
        .collect::<Result<_>>()?;
    let counted = if early_exit {
        match first_escape.into_inner() {
            u64::MAX => outcomes.len(),
            k => k as usize + 1,
        }
    } else {
        outcomes.len()
    };
    let verdict = PercolationVerdict::from_outcomes(
        params.gamma,
        outcomes[..counted]
            .iter()
            .map(|o| o.as_ref().expect("trials before the first escape always run")),
    );
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Ramp,
    Refine,
}

/// One evaluated intensity of a critical-intensity search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub step_kind: StepKind,
    pub gamma: f64,
    pub runs: u64,
    pub escapes: u64,
    pub capped: u64,
    pub percolates: bool,
}

impl HistoryEntry {
    fn new(step_kind: StepKind, v: &PercolationVerdict) -> Self {
        HistoryEntry {
            step_kind,
            gamma: v.gamma,
            runs: v.runs,
            escapes: v.escapes,
            capped: v.capped_runs,
            percolates: v.percolates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub runs: u64,
    /// Multiplicative step of the ramp from the branching bound.
    pub ramp_factor: f64,
    pub refinements: u32,
    pub max_ramp_steps: u32,
    pub early_exit: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            runs: 5000,
            ramp_factor: 1.1,
            refinements: 2,
            max_ramp_steps: 200,
            early_exit: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(RcmError::invalid("runs", "need at least one run"));
        }
        if !(self.ramp_factor.is_finite() && self.ramp_factor > 1.0) {
            return Err(RcmError::invalid(
                "ramp",
                format!("ramp factor must exceed 1, got {}", self.ramp_factor),
            ));
        }
        if self.max_ramp_steps == 0 {
            return Err(RcmError::invalid("max_ramp_steps", "must be positive"));
        }
        Ok(())
    }
}

/// Bracket for the critical intensity plus everything that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalEstimate {
    pub model: ConnectionModel,
    pub dim: usize,
    pub system_size: f64,
    pub runs: u64,
    pub ramp_factor: f64,
    pub refinements: u32,
    pub seed: u64,
    pub branching_bound: f64,
    pub lower: f64,
    pub upper: f64,
    pub midpoint: f64,
    /// The branching bound itself percolated, so `lower` was set to
    /// `branching_bound / ramp_factor` without being tested.
    pub lower_untested: bool,
    /// Some evaluation had capped runs.
    pub unreliable: bool,
    pub warnings: Vec<String>,
    pub history: Vec<HistoryEntry>,
    pub wall_time_ms: f64,
}

impl CriticalEstimate {
    /// Last verdict recorded at exactly `gamma`.
    pub fn last_verdict_at(&self, gamma: f64) -> Option<&HistoryEntry> {
        self.history.iter().rev().find(|h| h.gamma == gamma)
    }
}

/// SplitMix64 finalizer; decorrelates the seed of each evaluation.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Master seed of the `evaluation`-th verdict of a search.
pub fn evaluation_seed(master_seed: u64, evaluation: u64) -> u64 {
    mix(master_seed ^ mix(evaluation))
}

/// Ramps `γ_k = γ_branch · ramp^k` up from the branching bound until the
/// first percolating verdict, then halves the bracket `refinements` times.
pub fn estimate_critical(
    params: &SimParams,
    model: &ConnectionModel,
    config: &SearchConfig,
    master_seed: u64,
) -> Result<CriticalEstimate> {
    let start = Instant::now();
    config.validate()?;
    params.validate(model)?;
    let gamma0 = branching_bound(model, params.dim as u32)?;

    let mut history = Vec::new();
    let mut warnings = Vec::new();
    let mut evaluation = 0u64;
    let mut evaluate = |gamma: f64, kind: StepKind, history: &mut Vec<HistoryEntry>| -> Result<bool> {
        let seed = evaluation_seed(master_seed, evaluation);
        evaluation += 1;
        let v = percolation_verdict(&params.with_gamma(gamma), model, config.runs, seed, config.early_exit)?;
        if v.unreliable() {
            warnings.push(format!(
                "{} of {} runs at gamma={gamma} hit a work cap",
                v.capped_runs, v.runs
            ));
        }
        history.push(HistoryEntry::new(kind, &v));
        Ok(v.percolates)
    };

    let mut k = 0u32;
    loop {
        let gamma = gamma0 * config.ramp_factor.powi(k as i32);
        if evaluate(gamma, StepKind::Ramp, &mut history)? {
            break;
        }
        k += 1;
        if k >= config.max_ramp_steps {
            return Err(RcmError::RampExhausted {
                steps: k,
                last_gamma: gamma,
            });
        }
    }
    let lower_untested = k == 0;
    let mut upper = gamma0 * config.ramp_factor.powi(k as i32);
    let mut lower = if lower_untested {
        gamma0 / config.ramp_factor
    } else {
        gamma0 * config.ramp_factor.powi(k as i32 - 1)
    };

    for _ in 0..config.refinements {
        let mid = 0.5 * (lower + upper);
        if evaluate(mid, StepKind::Refine, &mut history)? {
            upper = mid;
        } else {
            lower = mid;
        }
    }
    if lower_untested {
        warnings.insert(
            0,
            "the branching bound already percolated; lower end set to branching_bound / ramp_factor untested".into(),
        );
    }
    let unreliable = history.iter().any(|h| h.capped > 0);

    Ok(CriticalEstimate {
        model: model.clone(),
        dim: params.dim,
        system_size: params.system_size,
        runs: config.runs,
        ramp_factor: config.ramp_factor,
        refinements: config.refinements,
        seed: master_seed,
        branching_bound: gamma0,
        lower,
        upper,
        midpoint: 0.5 * (lower + upper),
        lower_untested,
        unreliable,
        warnings,
        history,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
