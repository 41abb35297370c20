//! Growth of the origin's cluster in a Poisson random connection model,
//! generating Poisson points lazily around cluster points until the
//! cluster dies out inside `B(0, S)` or reaches beyond it.
//!
//! Within one processing step the random draws happen in a fixed order:
//!
//! 1. one uniform per unattached point within range of the processed
//!    point, in ascending id order;
//! 2. the Poisson count for the uncovered part of its range ball;
//! 3. the placements (Gaussian direction, then radius uniform) per point;
//! 4. one uniform per newly generated point, in generation order.
//!
//! A point joining the cluster with norm greater than `S` ends the run as
//! escaped at once.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[cfg(debug_assertions)]
use rustc_hash::FxHashSet;

use crate::connection::ConnectionModel;
use crate::error::{RcmError, Result};
use crate::geometry::{distance, validate_dim, CellGrid, PointId, PointStore};
use crate::sampling::{CoverSet, RngStream, UncoveredSampler};

pub const DEFAULT_MAX_GENERATED_POINTS: u64 = 10_000_000;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Parameters of one exploration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub dim: usize,
    pub gamma: f64,
    /// Radius `S` of the observation window.
    pub system_size: f64,
    /// Deterministic points added to the Poisson process; they start
    /// unattached and get ids `1..=extra_points.len()`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_points: Vec<Vec<f64>>,
    pub max_generated_points: u64,
    pub max_steps: u64,
}

impl SimParams {
    pub fn new(dim: usize, gamma: f64, system_size: f64) -> Self {
        SimParams {
            dim,
            gamma,
            system_size,
            extra_points: Vec::new(),
            max_generated_points: DEFAULT_MAX_GENERATED_POINTS,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        SimParams { gamma, ..self.clone() }
    }

    pub fn validate(&self, model: &ConnectionModel) -> Result<()> {
        validate_dim(self.dim)?;
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(RcmError::invalid(
                "gamma",
                format!("intensity must be finite and >= 0, got {}", self.gamma),
            ));
        }
        if !(self.system_size.is_finite() && self.system_size > model.range()) {
            return Err(RcmError::invalid(
                "system_size",
                format!(
                    "system size must exceed the connection range {} (got {})",
                    model.range(),
                    self.system_size
                ),
            ));
        }
        if self.max_generated_points == 0 || self.max_generated_points > u64::from(u32::MAX / 2) {
            return Err(RcmError::invalid("max_generated_points", "cap must be in 1..=2^31"));
        }
        if self.max_steps == 0 {
            return Err(RcmError::invalid("max_steps", "cap must be positive"));
        }
        for p in &self.extra_points {
            if p.len() != self.dim || p.iter().any(|c| !c.is_finite()) {
                return Err(RcmError::invalid(
                    "extra_points",
                    "extra point has wrong dimension or non-finite coordinate",
                ));
            }
        }
        Ok(())
    }
}

/// Result of one exploration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterOutcome {
    pub escaped: bool,
    /// Points in the cluster when the run stopped, origin included.
    pub cluster_size: u64,
    pub generated_points: u64,
    pub steps: u64,
    /// Largest norm among cluster points.
    pub max_norm: f64,
    /// A work cap fired before the run was decided.
    pub capped: bool,
}

impl ClusterOutcome {
    pub fn contained(&self) -> bool {
        !self.escaped && !self.capped
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct FrontierEntry {
    norm: f64,
    id: PointId,
}

impl Eq for FrontierEntry {}

impl Ord for FrontierEntry {
    // farthest first, then smaller id
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm.total_cmp(&other.norm).then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Membership {
    Unattached,
    Cluster,
}

enum Stop {
    Escaped,
    Capped,
}

struct Exploration<'a> {
    model: &'a ConnectionModel,
    params: &'a SimParams,
    range: f64,
    store: PointStore,
    membership: Vec<Membership>,
    frontier: BinaryHeap<FrontierEntry>,
    unattached: CellGrid,
    cover: CoverSet,
    sampler: UncoveredSampler,
    cluster_size: u64,
    saturated: u64,
    generated: u64,
    steps: u64,
    max_norm: f64,
    #[cfg(debug_assertions)]
    decided_pairs: FxHashSet<(PointId, PointId)>,
}

impl<'a> Exploration<'a> {
    fn new(params: &'a SimParams, model: &'a ConnectionModel) -> Result<Self> {
        params.validate(model)?;
        let range = model.range();
        let mut store = PointStore::new(params.dim);
        let mut unattached = CellGrid::new(params.dim, range)?;
        let origin = store.push(&vec![0.0; params.dim]);
        debug_assert_eq!(origin, 0);
        let mut membership = vec![Membership::Unattached];
        for p in &params.extra_points {
            let id = store.push(p);
            unattached.insert(&store, id);
            membership.push(Membership::Unattached);
        }
        Ok(Exploration {
            model,
            params,
            range,
            store,
            membership,
            frontier: BinaryHeap::new(),
            unattached,
            cover: CoverSet::new(params.dim, range)?,
            sampler: UncoveredSampler::new(params.dim, range, params.gamma)?,
            cluster_size: 0,
            saturated: 0,
            generated: 0,
            steps: 0,
            max_norm: 0.0,
            #[cfg(debug_assertions)]
            decided_pairs: FxHashSet::default(),
        })
    }

    #[inline]
    fn record_pair(&mut self, _a: PointId, _b: PointId) {
        #[cfg(debug_assertions)]
        {
            let key = if _a < _b { (_a, _b) } else { (_b, _a) };
            assert!(self.decided_pairs.insert(key), "pair {key:?} decided twice");
        }
    }

    fn join_cluster(&mut self, id: PointId) -> std::result::Result<(), Stop> {
        self.membership[id as usize] = Membership::Cluster;
        self.cluster_size += 1;
        let norm = self.store.norm(id);
        self.max_norm = self.max_norm.max(norm);
        self.frontier.push(FrontierEntry { norm, id });
        if norm > self.params.system_size {
            return Err(Stop::Escaped);
        }
        Ok(())
    }

    fn run<G: Rng + ?Sized>(&mut self, rng: &mut G) -> std::result::Result<(), Stop> {
        self.join_cluster(0)?;
        let mut nearby: Vec<PointId> = Vec::new();
        let mut fresh: Vec<PointId> = Vec::new();
        let mut center = vec![0.0; self.params.dim];
        while let Some(FrontierEntry { id: x, .. }) = self.frontier.pop() {
            if self.steps >= self.params.max_steps {
                return Err(Stop::Capped);
            }
            self.steps += 1;
            center.copy_from_slice(self.store.coords(x));

            nearby.clear();
            self.unattached.within(&self.store, &center, self.range, &mut nearby);
            nearby.sort_unstable();
            for &y in &nearby {
                self.record_pair(x, y);
                let r = distance(&center, self.store.coords(y));
                if self.model.decide_at_distance(r, rng) {
                    self.unattached.remove(&self.store, y);
                    self.join_cluster(y)?;
                }
            }

            fresh.clear();
            self.sampler
                .sample_into(rng, &center, &self.cover, &mut self.store, &mut fresh);
            self.generated += fresh.len() as u64;
            if self.generated > self.params.max_generated_points {
                return Err(Stop::Capped);
            }
            for &y in &fresh {
                self.membership.push(Membership::Unattached);
                debug_assert_eq!(self.membership.len(), y as usize + 1);
            }
            for &y in &fresh {
                self.record_pair(x, y);
                let r = distance(&center, self.store.coords(y));
                if self.model.decide_at_distance(r, rng) {
                    self.join_cluster(y)?;
                } else {
                    self.unattached.insert(&self.store, y);
                }
            }

            self.cover.insert(&self.store, x);
            self.saturated += 1;
        }
        Ok(())
    }

    fn outcome(&self, stop: Option<Stop>) -> ClusterOutcome {
        ClusterOutcome {
            escaped: matches!(stop, Some(Stop::Escaped)),
            cluster_size: self.cluster_size,
            generated_points: self.generated,
            steps: self.steps,
            max_norm: self.max_norm,
            capped: matches!(stop, Some(Stop::Capped)),
        }
    }

    fn in_cluster(&self, id: PointId) -> bool {
        self.membership[id as usize] == Membership::Cluster
    }
}

/// Explores the cluster of the origin. `rng` should be fresh for the trial.
pub fn explore_cluster<G: Rng + ?Sized>(
    params: &SimParams,
    model: &ConnectionModel,
    rng: &mut G,
) -> Result<ClusterOutcome> {
    explore_with_extras(params, model, rng).map(|(outcome, _)| outcome)
}

/// Like [`explore_cluster`], also reporting which extra points ended up in
/// the cluster.
pub fn explore_with_extras<G: Rng + ?Sized>(
    params: &SimParams,
    model: &ConnectionModel,
    rng: &mut G,
) -> Result<(ClusterOutcome, Vec<bool>)> {
    let mut run = Exploration::new(params, model)?;
    let stop = run.run(rng).err();
    let outcome = run.outcome(stop);
    // the point being processed when a run stops is in neither set
    let in_progress = u64::from(outcome.escaped || outcome.capped);
    debug_assert_eq!(
        outcome.cluster_size,
        run.saturated + run.frontier.len() as u64 + in_progress
    );
    let joined = (1..=params.extra_points.len())
        .map(|i| run.in_cluster(i as PointId))
        .collect();
    Ok((outcome, joined))
}

/// Monte Carlo estimate of the pair connectedness `τ(0, y)` for `|y| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConnectedness {
    pub r: f64,
    pub trials: u64,
    pub connected: u64,
    /// Trials in which the verdict on `y` was reached.
    pub resolved: u64,
    pub excluded_escaped: u64,
    pub excluded_capped: u64,
    pub estimate: f64,
    /// Wilson 95% interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// More than 1% of trials were excluded.
    pub excessive_exclusions: bool,
}

fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = n as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimates `τ` by exploring with one extra point at `(r, 0, …, 0)`.
/// Trial `i` uses stream `i` of `master_seed`; trials run on the current
/// rayon pool.
pub fn estimate_pair_connectedness(
    params: &SimParams,
    model: &ConnectionModel,
    r: f64,
    trials: u64,
    master_seed: u64,
) -> Result<PairConnectedness> {
    if !(r.is_finite() && r > 0.0) {
        return Err(RcmError::invalid("r", format!("distance must be positive, got {r}")));
    }
    if r >= 2.0 * params.system_size {
        return Err(RcmError::invalid("r", "distance must be below twice the system size"));
    }
    if trials == 0 {
        return Err(RcmError::invalid("trials", "need at least one trial"));
    }
    let mut with_y = params.clone();
    let mut y = vec![0.0; params.dim];
    y[0] = r;
    with_y.extra_points = vec![y];
    with_y.validate(model)?;

    let results: Vec<(ClusterOutcome, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(master_seed, i);
            explore_with_extras(&with_y, model, &mut rng).map(|(o, joined)| (o, joined[0]))
        })
        .collect::<Result<_>>()?;

    let (mut connected, mut resolved, mut escaped, mut capped) = (0, 0, 0, 0);
    for (outcome, joined) in results {
        if joined {
            connected += 1;
            resolved += 1;
        } else if outcome.capped {
            capped += 1;
        } else if outcome.escaped {
            escaped += 1;
        } else {
            resolved += 1;
        }
    }
    let estimate = if resolved > 0 {
        connected as f64 / resolved as f64
    } else {
        0.0
    };
    let (ci_low, ci_high) = wilson_interval(connected, resolved);
    Ok(PairConnectedness {
        r,
        trials,
        connected,
        resolved,
        excluded_escaped: escaped,
        excluded_capped: capped,
        estimate,
        ci_low,
        ci_high,
        excessive_exclusions: (escaped + capped) * 100 > trials,
    })
}
