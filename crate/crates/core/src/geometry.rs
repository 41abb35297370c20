//! Points in R^d, ball volumes and a uniform-grid index for fixed-radius
//! neighbor queries.
//!
//! Distances are compared with `<=` on the computed 64-bit Euclidean
//! distance, so a point at distance exactly `R` is within range.

use std::f64::consts::PI;

use rustc_hash::FxHashMap;

use crate::error::{RcmError, Result};

/// Largest supported dimension. A grid query touches `3^d` cells.
pub const MAX_DIM: usize = 8;

/// Point label, unique within one exploration run.
pub type PointId = u32;

/// A location in R^d with its cached Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub id: PointId,
    pub coords: Vec<f64>,
    pub norm: f64,
}

impl Point {
    pub fn new(id: PointId, coords: Vec<f64>) -> Result<Self> {
        validate_dim(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(RcmError::invalid("coords", "coordinates must be finite"));
        }
        let norm = euclidean_norm(&coords);
        Ok(Point { id, coords, norm })
    }

    pub fn origin(id: PointId, dim: usize) -> Self {
        Point {
            id,
            coords: vec![0.0; dim],
            norm: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn distance_to(&self, other: &Point) -> f64 {
        distance(&self.coords, &other.coords)
    }
}

pub(crate) fn validate_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(RcmError::invalid(
            "dim",
            format!("dimension must be in 1..={MAX_DIM}, got {dim}"),
        ));
    }
    Ok(())
}

#[inline]
pub fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[inline]
pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Volume of the unit ball in R^d via `V_d = 2π/d · V_{d-2}`.
fn unit_ball_volume(d: u32) -> f64 {
    let (mut v, mut k) = if d.is_multiple_of(2) { (1.0, 0) } else { (2.0, 1) };
    while k < d {
        k += 2;
        v *= 2.0 * PI / f64::from(k);
    }
    v
}

/// Volume of `B(0, radius)` in R^d, i.e. `π^{d/2} R^d / Γ(d/2 + 1)`.
pub fn ball_volume(d: u32, radius: f64) -> Result<f64> {
    if d == 0 {
        return Err(RcmError::invalid("dim", "dimension must be at least 1"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(RcmError::invalid(
            "range",
            format!("radius must be finite and positive, got {radius}"),
        ));
    }
    Ok(unit_ball_volume(d) * radius.powi(d as i32))
}

/// Surface area of the unit sphere in R^d, `2π^{d/2} / Γ(d/2)`.
pub fn unit_sphere_area(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(RcmError::invalid("dim", "dimension must be at least 1"));
    }
    Ok(f64::from(d) * unit_ball_volume(d))
}

/// Flat coordinate arena; a point's id is its insertion index.
#[derive(Debug, Clone)]
pub struct PointStore {
    dim: usize,
    coords: Vec<f64>,
    norms: Vec<f64>,
}

impl PointStore {
    pub fn new(dim: usize) -> Self {
        PointStore {
            dim,
            coords: Vec::new(),
            norms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Appends a point and returns its id.
    pub fn push(&mut self, coords: &[f64]) -> PointId {
        debug_assert_eq!(coords.len(), self.dim);
        let id = self.norms.len() as PointId;
        self.coords.extend_from_slice(coords);
        self.norms.push(euclidean_norm(coords));
        id
    }

    #[inline]
    pub fn coords(&self, id: PointId) -> &[f64] {
        let start = id as usize * self.dim;
        &self.coords[start..start + self.dim]
    }

    #[inline]
    pub fn norm(&self, id: PointId) -> f64 {
        self.norms[id as usize]
    }

    pub fn point(&self, id: PointId) -> Point {
        Point {
            id,
            coords: self.coords(id).to_vec(),
            norm: self.norm(id),
        }
    }
}

type CellKey = [i32; MAX_DIM];

/// Uniform grid of point ids keyed by integer cell coordinates.
///
/// Coordinates live in a [`PointStore`] passed to every call, so several
/// grids can index disjoint subsets of one store. A query radius must not
/// exceed the cell size.
#[derive(Debug, Clone)]
pub struct CellGrid {
    dim: usize,
    cell_size: f64,
    inv_width: f64,
    cells: FxHashMap<CellKey, Vec<PointId>>,
    len: usize,
}

impl CellGrid {
    pub fn new(dim: usize, cell_size: f64) -> Result<Self> {
        validate_dim(dim)?;
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(RcmError::invalid(
                "cell_size",
                format!("cell size must be finite and positive, got {cell_size}"),
            ));
        }
        // Slightly widened cells keep floor() rounding from pushing an
        // in-range neighbor two cells away.
        let width = cell_size * (1.0 + 16.0 * f64::EPSILON);
        Ok(CellGrid {
            dim,
            cell_size,
            inv_width: 1.0 / width,
            cells: FxHashMap::default(),
            len: 0,
        })
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn key(&self, x: &[f64]) -> CellKey {
        let mut key = [0i32; MAX_DIM];
        for (k, c) in key.iter_mut().zip(x) {
            *k = (c * self.inv_width).floor() as i32;
        }
        key
    }

    pub fn insert(&mut self, store: &PointStore, id: PointId) {
        let key = self.key(store.coords(id));
        self.cells.entry(key).or_default().push(id);
        self.len += 1;
    }

    /// Removes `id`; returns false if it was not present.
    pub fn remove(&mut self, store: &PointStore, id: PointId) -> bool {
        let key = self.key(store.coords(id));
        let Some(bucket) = self.cells.get_mut(&key) else {
            return false;
        };
        let Some(pos) = bucket.iter().position(|&other| other == id) else {
            return false;
        };
        bucket.swap_remove(pos);
        if bucket.is_empty() {
            self.cells.remove(&key);
        }
        self.len -= 1;
        true
    }

    /// Calls `visit(id, distance)` for every stored point within `radius`
    /// of `x`. Stops early when `visit` returns false.
    fn scan<F>(&self, store: &PointStore, x: &[f64], radius: f64, mut visit: F)
    where
        F: FnMut(PointId, f64) -> bool,
    {
        debug_assert!(radius <= self.cell_size);
        if self.len == 0 {
            return;
        }
        let center = self.key(x);
        let mut offset = [-1i32; MAX_DIM];
        let mut key = [0i32; MAX_DIM];
        loop {
            for i in 0..self.dim {
                key[i] = center[i].saturating_add(offset[i]);
            }
            if let Some(bucket) = self.cells.get(&key) {
                for &id in bucket {
                    let r = distance(x, store.coords(id));
                    if r <= radius && !visit(id, r) {
                        return;
                    }
                }
            }
            // odometer over {-1, 0, 1}^dim
            let mut i = 0;
            loop {
                if i == self.dim {
                    return;
                }
                if offset[i] < 1 {
                    offset[i] += 1;
                    break;
                }
                offset[i] = -1;
                i += 1;
            }
        }
    }

    /// Appends the ids within `radius` of `x` to `out`, in no particular order.
    pub fn within(&self, store: &PointStore, x: &[f64], radius: f64, out: &mut Vec<PointId>) {
        self.scan(store, x, radius, |id, _| {
            out.push(id);
            true
        });
    }

    /// Whether any stored point lies within `radius` of `x`.
    pub fn any_within(&self, store: &PointStore, x: &[f64], radius: f64) -> bool {
        let mut found = false;
        self.scan(store, x, radius, |_, _| {
            found = true;
            false
        });
        found
    }
}

/// A point store together with one grid over all of its points.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    store: PointStore,
    grid: CellGrid,
}

impl SpatialIndex {
    pub fn new(dim: usize, cell_size: f64) -> Result<Self> {
        Ok(SpatialIndex {
            store: PointStore::new(dim),
            grid: CellGrid::new(dim, cell_size)?,
        })
    }

    pub fn insert(&mut self, coords: &[f64]) -> Result<PointId> {
        if coords.len() != self.store.dim() {
            return Err(RcmError::invalid(
                "coords",
                format!("expected {} coordinates, got {}", self.store.dim(), coords.len()),
            ));
        }
        let id = self.store.push(coords);
        self.grid.insert(&self.store, id);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn point(&self, id: PointId) -> Point {
        self.store.point(id)
    }

    pub fn cell_size(&self) -> f64 {
        self.grid.cell_size()
    }

    /// Ids of stored points within `radius` of `x`, ascending.
    pub fn neighbors_within(&self, x: &[f64], radius: f64) -> Vec<PointId> {
        let mut out = Vec::new();
        self.grid.within(&self.store, x, radius, &mut out);
        out.sort_unstable();
        out
    }
}
