//! Seedable per-trial random streams and the Poisson-process samplers used
//! by the cluster exploration.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{RcmError, Result};
use crate::geometry::{ball_volume, distance, CellGrid, Point, PointId, PointStore};

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2023;

/// A reproducible random stream identified by `(master_seed, stream_key)`.
///
/// The stream key selects one of 2^64 disjoint ChaCha8 streams under the
/// same key, so trials draw independent sequences no matter which thread
/// runs them or in which order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_key: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_key: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_key);
        RngStream {
            master_seed,
            stream_key,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_key(&self) -> u64 {
        self.stream_key
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// A Poisson(mean) count sampler that also accepts `mean = 0`.
#[derive(Debug, Clone, Copy)]
pub struct PoissonCount(Option<Poisson<f64>>);

impl PoissonCount {
    pub fn new(mean: f64) -> Result<Self> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(RcmError::invalid(
                "mean",
                format!("Poisson mean must be finite and >= 0, got {mean}"),
            ));
        }
        if mean == 0.0 {
            return Ok(PoissonCount(None));
        }
        let dist = Poisson::new(mean).map_err(|e| RcmError::invalid("mean", e.to_string()))?;
        Ok(PoissonCount(Some(dist)))
    }

    #[inline]
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> u64 {
        match &self.0 {
            None => 0,
            Some(dist) => dist.sample(rng) as u64,
        }
    }
}

/// One exact Poisson(mean) draw.
pub fn poisson_count<G: Rng + ?Sized>(rng: &mut G, mean: f64) -> Result<u64> {
    Ok(PoissonCount::new(mean)?.sample(rng))
}

/// Fills `out` with a uniform point of `B(center, radius)`: a Gaussian
/// direction scaled by `radius · U^{1/d}`.
pub fn fill_uniform_in_ball<G: Rng + ?Sized>(rng: &mut G, center: &[f64], radius: f64, out: &mut [f64]) {
    let d = center.len();
    debug_assert_eq!(out.len(), d);
    let norm = loop {
        for o in out.iter_mut() {
            *o = rng.sample(StandardNormal);
        }
        let n = out.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.0 {
            break n;
        }
    };
    let u: f64 = rng.random();
    let scale = radius * u.powf(1.0 / d as f64) / norm;
    for (o, c) in out.iter_mut().zip(center) {
        *o = c + *o * scale;
    }
}

pub fn uniform_in_ball<G: Rng + ?Sized>(rng: &mut G, center: &[f64], radius: f64) -> Vec<f64> {
    let mut out = vec![0.0; center.len()];
    fill_uniform_in_ball(rng, center, radius, &mut out);
    out
}

/// Centers of balls of a common radius, indexed on a grid of cell size
/// `2 · radius`. Coordinates are held by an external [`PointStore`].
#[derive(Debug, Clone)]
pub struct CoverSet {
    radius: f64,
    grid: CellGrid,
}

impl CoverSet {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        Ok(CoverSet {
            radius,
            grid: CellGrid::new(dim, 2.0 * radius)?,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn insert(&mut self, store: &PointStore, center: PointId) {
        self.grid.insert(store, center);
    }

    /// Whether `x` lies in some covered (closed) ball.
    #[inline]
    pub fn covers(&self, store: &PointStore, x: &[f64]) -> bool {
        self.grid.any_within(store, x, self.radius)
    }
}

/// Reusable sampler for `Poisson(gamma)` restricted to a ball minus a
/// cover.
#[derive(Debug, Clone)]
pub(crate) struct UncoveredSampler {
    radius: f64,
    count: PoissonCount,
    scratch: Vec<f64>,
}

impl UncoveredSampler {
    pub(crate) fn new(dim: usize, radius: f64, gamma: f64) -> Result<Self> {
        let mean = gamma * ball_volume(dim as u32, radius)?;
        Ok(UncoveredSampler {
            radius,
            count: PoissonCount::new(mean)?,
            scratch: vec![0.0; dim],
        })
    }

    /// Draws the count, then the placements; accepted points are appended
    /// to `store` and their ids to `out` in generation order. Returns the
    /// number of rejected placements.
    pub(crate) fn sample_into<G: Rng + ?Sized>(
        &mut self,
        rng: &mut G,
        center: &[f64],
        cover: &CoverSet,
        store: &mut PointStore,
        out: &mut Vec<PointId>,
    ) -> u64 {
        let k = self.count.sample(rng);
        let mut rejected = 0;
        for _ in 0..k {
            fill_uniform_in_ball(rng, center, self.radius, &mut self.scratch);
            if cover.covers(store, &self.scratch) {
                rejected += 1;
                continue;
            }
            out.push(store.push(&self.scratch));
        }
        rejected
    }
}

/// A realization of a Poisson process of intensity `gamma` on
/// `B(center, radius)` minus the union of `B(c, radius)` over `covered`.
///
/// Returned points are labelled `0, 1, …` in generation order.
pub fn sample_uncovered<G: Rng + ?Sized>(
    rng: &mut G,
    center: &[f64],
    radius: f64,
    covered: &[Point],
    gamma: f64,
) -> Result<Vec<Point>> {
    let dim = center.len();
    let mut store = PointStore::new(dim);
    let mut cover = CoverSet::new(dim, radius)?;
    for c in covered {
        if c.coords.len() != dim {
            return Err(RcmError::invalid("covered", "covered center has the wrong dimension"));
        }
        // farther centers cannot intersect the ball
        if distance(&c.coords, center) < 2.0 * radius {
            let id = store.push(&c.coords);
            cover.insert(&store, id);
        }
    }
    let first_new = store.len() as PointId;
    let mut sampler = UncoveredSampler::new(dim, radius, gamma)?;
    let mut ids = Vec::new();
    sampler.sample_into(rng, center, &cover, &mut store, &mut ids);
    Ok(ids
        .into_iter()
        .map(|id| {
            let mut p = store.point(id);
            p.id = id - first_new;
            p
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mean_is_zero() {
        let mut rng = RngStream::new(1, 0);
        let before = rng.clone();
        assert_eq!(poisson_count(&mut rng, 0.0).unwrap(), 0);
        assert_eq!(rng, before);
        assert!(poisson_count(&mut rng, -1.0).is_err());
        assert!(poisson_count(&mut rng, f64::NAN).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = {
            let mut r = RngStream::new(42, 7);
            (0..8).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = RngStream::new(42, 7);
            (0..8).map(|_| r.next_u64()).collect()
        };
        let c: Vec<u64> = {
            let mut r = RngStream::new(42, 8);
            (0..8).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = RngStream::new(3, 0);
        for d in 1..=6 {
            let center: Vec<f64> = (0..d).map(|i| i as f64 - 1.5).collect();
            for _ in 0..2000 {
                let p = uniform_in_ball(&mut rng, &center, 2.0);
                assert!(distance(&p, &center) <= 2.0);
            }
        }
    }

    #[test]
    fn gamma_zero_and_full_cover() {
        let mut rng = RngStream::new(5, 0);
        assert!(sample_uncovered(&mut rng, &[0.0, 0.0], 2.0, &[], 0.0)
            .unwrap()
            .is_empty());
        let center = Point::new(0, vec![1.0, -1.0]).unwrap();
        for _ in 0..200 {
            let pts = sample_uncovered(&mut rng, &center.coords, 2.0, std::slice::from_ref(&center), 3.0).unwrap();
            assert!(pts.is_empty());
        }
    }

    #[test]
    fn uncovered_points_avoid_cover() {
        let mut rng = RngStream::new(9, 0);
        let covered = vec![
            Point::new(0, vec![1.0, 0.0]).unwrap(),
            Point::new(1, vec![-0.5, 1.5]).unwrap(),
            Point::new(2, vec![30.0, 0.0]).unwrap(),
        ];
        let mut total = 0;
        for _ in 0..500 {
            let pts = sample_uncovered(&mut rng, &[0.0, 0.0], 2.0, &covered, 2.0).unwrap();
            for p in &pts {
                assert!(p.norm <= 2.0);
                assert!(covered.iter().all(|c| p.distance_to(c) > 2.0));
            }
            total += pts.len();
        }
        assert!(total > 0);
    }
}
