//! C ABI over `rcm-perc`.
//!
//! Models and search results are opaque handles created and freed here.
//! Every fallible call returns an [`RcmStatus`]; on failure the message is
//! available from [`rcm_last_error_message`] on the same thread. Panics are
//! caught at the boundary and reported as `RCM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rcm_perc::exploration::{DEFAULT_MAX_GENERATED_POINTS, DEFAULT_MAX_STEPS};
use rcm_perc::{ConnectionModel, CriticalEstimate, RcmError, RngStream, SearchConfig, SimParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    QuadratureFailed = 3,
    InfiniteBound = 4,
    RampExhausted = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque connection model.
pub struct RcmModel(ConnectionModel);

/// Opaque critical-intensity search result.
pub struct RcmEstimate(CriticalEstimate);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RcmSimParams {
    pub dim: u32,
    pub gamma: f64,
    /// Radius of the observation window.
    pub system_size: f64,
    pub max_generated_points: u64,
    pub max_steps: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RcmSearchConfig {
    pub runs: u64,
    pub ramp_factor: f64,
    pub refinements: u32,
    pub max_ramp_steps: u32,
    pub early_exit: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RcmClusterOutcome {
    pub escaped: bool,
    pub cluster_size: u64,
    pub generated_points: u64,
    pub steps: u64,
    pub max_norm: f64,
    pub capped: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RcmVerdict {
    pub gamma: f64,
    pub runs: u64,
    pub escapes: u64,
    pub contained: u64,
    pub capped_runs: u64,
    pub percolates: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &RcmError) -> RcmStatus {
    match err {
        RcmError::InvalidParameter { .. } | RcmError::Table(_) => RcmStatus::InvalidParameter,
        RcmError::QuadratureNonConvergence { .. } => RcmStatus::QuadratureFailed,
        RcmError::InfiniteBranchingBound => RcmStatus::InfiniteBound,
        RcmError::RampExhausted { .. } => RcmStatus::RampExhausted,
        RcmError::Io(_) | RcmError::Json(_) | RcmError::Csv(_) => RcmStatus::Io,
    }
}

struct Null(&'static str);

enum Failure {
    Null(&'static str),
    Rcm(RcmError),
}

impl From<RcmError> for Failure {
    fn from(e: RcmError) -> Self {
        Failure::Rcm(e)
    }
}

impl From<Null> for Failure {
    fn from(n: Null) -> Self {
        Failure::Null(n.0)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RcmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RcmStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("`{name}` must not be null"));
            RcmStatus::NullPointer
        }
        Ok(Err(Failure::Rcm(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            RcmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Null> {
    p.as_ref().ok_or(Null(name))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Null> {
    p.as_mut().ok_or(Null(name))
}

fn sim_params(p: &RcmSimParams) -> SimParams {
    SimParams {
        max_generated_points: p.max_generated_points,
        max_steps: p.max_steps,
        ..SimParams::new(p.dim as usize, p.gamma, p.system_size)
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rcm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parameters with default work caps.
#[no_mangle]
pub extern "C" fn rcm_sim_params_default(dim: u32, gamma: f64, system_size: f64) -> RcmSimParams {
    RcmSimParams {
        dim,
        gamma,
        system_size,
        max_generated_points: DEFAULT_MAX_GENERATED_POINTS,
        max_steps: DEFAULT_MAX_STEPS,
    }
}

#[no_mangle]
pub extern "C" fn rcm_search_config_default() -> RcmSearchConfig {
    let d = SearchConfig::default();
    RcmSearchConfig {
        runs: d.runs,
        ramp_factor: d.ramp_factor,
        refinements: d.refinements,
        max_ramp_steps: d.max_ramp_steps,
        early_exit: d.early_exit,
    }
}

fn new_model(out: *mut *mut RcmModel, build: impl FnOnce() -> rcm_perc::Result<ConnectionModel>) -> RcmStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        *out = ptr::null_mut();
        *out = Box::into_raw(Box::new(RcmModel(build()?)));
        Ok(())
    })
}

/// # Safety
/// `out` must be NULL or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rcm_model_gilbert(range: f64, out: *mut *mut RcmModel) -> RcmStatus {
    new_model(out, || ConnectionModel::gilbert(range))
}

/// # Safety
/// As for [`rcm_model_gilbert`].
#[no_mangle]
pub unsafe extern "C" fn rcm_model_penetrable(range: f64, p: f64, out: *mut *mut RcmModel) -> RcmStatus {
    new_model(out, || ConnectionModel::penetrable(range, p))
}

/// # Safety
/// As for [`rcm_model_gilbert`].
#[no_mangle]
pub unsafe extern "C" fn rcm_model_soft_sphere(
    range: f64,
    beta: f64,
    hardness: u32,
    out: *mut *mut RcmModel,
) -> RcmStatus {
    new_model(out, || ConnectionModel::soft_sphere(range, beta, hardness))
}

/// Piecewise-linear profile through `(radii[i], values[i])`.
///
/// # Safety
/// `radii` and `values` must each point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn rcm_model_tabulated(
    radii: *const f64,
    values: *const f64,
    len: usize,
    out: *mut *mut RcmModel,
) -> RcmStatus {
    if radii.is_null() || values.is_null() {
        return guard(|| Err(Null(if radii.is_null() { "radii" } else { "values" }).into()));
    }
    let radii = std::slice::from_raw_parts(radii, len).to_vec();
    let values = std::slice::from_raw_parts(values, len).to_vec();
    new_model(out, || ConnectionModel::tabulated(radii, values))
}

/// # Safety
/// `model` must be NULL or a handle from an `rcm_model_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn rcm_model_free(model: *mut RcmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Connection probability at distance `r`.
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcm_model_phi(model: *const RcmModel, r: f64, out: *mut f64) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        *out_ref(out, "out")? = model.0.phi_at(r);
        Ok(())
    })
}

/// `∫φ` over `R^dim`.
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcm_connectivity_mass(model: *const RcmModel, dim: u32, out: *mut f64) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let out = out_ref(out, "out")?;
        *out = model
            .0
            .effective_connectivity_mass(dim, rcm_perc::connection::DEFAULT_QUAD_TOL)?;
        Ok(())
    })
}

/// Branching lower bound `1 / ∫φ` on the critical intensity.
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcm_branching_bound(model: *const RcmModel, dim: u32, out: *mut f64) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let out = out_ref(out, "out")?;
        *out = rcm_perc::branching_bound(&model.0, dim)?;
        Ok(())
    })
}

/// Explores the origin's cluster for trial `trial` of master seed `seed`.
/// Trial `k` here equals trial `k` of a verdict with the same seed.
///
/// # Safety
/// `model` must be a live handle; `params` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcm_explore(
    model: *const RcmModel,
    params: *const RcmSimParams,
    seed: u64,
    trial: u64,
    out: *mut RcmClusterOutcome,
) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let params = sim_params(deref(params, "params")?);
        let out = out_ref(out, "out")?;
        let o = rcm_perc::explore_cluster(&params, &model.0, &mut RngStream::new(seed, trial))?;
        *out = RcmClusterOutcome {
            escaped: o.escaped,
            cluster_size: o.cluster_size,
            generated_points: o.generated_points,
            steps: o.steps,
            max_norm: o.max_norm,
            capped: o.capped,
        };
        Ok(())
    })
}

/// Percolation verdict from `runs` independent explorations.
///
/// # Safety
/// `model` must be a live handle; `params` readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcm_percolation_verdict(
    model: *const RcmModel,
    params: *const RcmSimParams,
    runs: u64,
    seed: u64,
    early_exit: bool,
    out: *mut RcmVerdict,
) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let params = sim_params(deref(params, "params")?);
        let out = out_ref(out, "out")?;
        let v = rcm_perc::percolation_verdict(&params, &model.0, runs, seed, early_exit)?;
        *out = RcmVerdict {
            gamma: v.gamma,
            runs: v.runs,
            escapes: v.escapes,
            contained: v.contained,
            capped_runs: v.capped_runs,
            percolates: v.percolates,
        };
        Ok(())
    })
}

/// Brackets the critical intensity. `params->gamma` is ignored.
///
/// # Safety
/// `model` must be a live handle; `params` and `config` readable; `out`
/// writable. Free the result with [`rcm_estimate_free`].
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_critical(
    model: *const RcmModel,
    params: *const RcmSimParams,
    config: *const RcmSearchConfig,
    seed: u64,
    out: *mut *mut RcmEstimate,
) -> RcmStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let params = sim_params(deref(params, "params")?);
        let c = deref(config, "config")?;
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let config = SearchConfig {
            runs: c.runs,
            ramp_factor: c.ramp_factor,
            refinements: c.refinements,
            max_ramp_steps: c.max_ramp_steps,
            early_exit: c.early_exit,
        };
        let est = rcm_perc::estimate_critical(&params, &model.0, &config, seed)?;
        *out = Box::into_raw(Box::new(RcmEstimate(est)));
        Ok(())
    })
}

/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_lower(est: *const RcmEstimate) -> f64 {
    est.as_ref().map_or(f64::NAN, |e| e.0.lower)
}

/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_upper(est: *const RcmEstimate) -> f64 {
    est.as_ref().map_or(f64::NAN, |e| e.0.upper)
}

/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_midpoint(est: *const RcmEstimate) -> f64 {
    est.as_ref().map_or(f64::NAN, |e| e.0.midpoint)
}

/// True when some verdict hit a work cap.
///
/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_unreliable(est: *const RcmEstimate) -> bool {
    est.as_ref().is_some_and(|e| e.0.unreliable)
}

/// Number of verdicts the search evaluated.
///
/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_evaluations(est: *const RcmEstimate) -> usize {
    est.as_ref().map_or(0, |e| e.0.history.len())
}

/// Full result as JSON. Free with [`rcm_string_free`]; NULL on failure.
///
/// # Safety
/// `est` must be NULL or a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_to_json(est: *const RcmEstimate) -> *mut c_char {
    let Some(est) = est.as_ref() else {
        set_last_error("`est` must not be null".into());
        return ptr::null_mut();
    };
    match serde_json::to_string(&est.0) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_last_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `est` must be NULL or a handle from [`rcm_estimate_critical`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn rcm_estimate_free(est: *mut RcmEstimate) {
    if !est.is_null() {
        drop(Box::from_raw(est));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rcm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads the last error into an owned Rust string; for tests and Rust callers.
pub fn last_error() -> Option<String> {
    let p = rcm_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}
