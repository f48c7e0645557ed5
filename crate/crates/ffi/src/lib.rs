//! C ABI over the `clairaut` crate.
//!
//! Objects cross the boundary as opaque heap handles, each with its own
//! `*_free`. Every fallible call returns a [`ClairautStatus`]; on anything but
//! `CLAIRAUT_STATUS_OK` (or `CHECK_FAILED`, which still fills its outputs) the
//! message is available from [`clairaut_last_error`] on the same thread.
//! Strings returned to the caller are released with [`clairaut_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clairaut::cli::{self, GeodesicRun, LoadedScenario, RunOptions};
use clairaut::Expr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautStatus {
    Ok = 0,
    /// The run completed and at least one gating check failed.
    CheckFailed = 1,
    /// Scenario or argument validation failed.
    InvalidInput = 2,
    /// A numerical error during evaluation (singular metric, domain exit, ...).
    RuntimeError = 3,
    NullPointer = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautFormat {
    Human = 0,
    Machine = 1,
}

/// A loaded and validated scenario.
pub struct ClairautScenarioHandle {
    inner: LoadedScenario,
}

/// A parsed symbolic expression.
pub struct ClairautExpr {
    inner: Expr,
}

/// An integrated geodesic with its Clairaut invariant.
pub struct ClairautTrajectory {
    inner: GeodesicRun,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: ClairautStatus, msg: impl ToString) -> ClairautStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> ClairautStatus>(f: F) -> ClairautStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ClairautStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ClairautStatus> {
    if p.is_null() {
        return Err(fail(ClairautStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ClairautStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], ClairautStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(ClairautStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! handle {
    ($p:expr, $what:literal) => {
        match $p.as_ref() {
            Some(h) => h,
            None => return fail(ClairautStatus::NullPointer, concat!($what, " is null")),
        }
    };
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn clairaut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn clairaut_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn clairaut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a scenario file, or a bundled scenario by name.
///
/// # Safety
/// `path` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_load(
    path: *const c_char,
    out: *mut *mut ClairautScenarioHandle,
) -> ClairautStatus {
    guard(|| {
        if out.is_null() {
            return fail(ClairautStatus::NullPointer, "out is null");
        }
        let path = try_status!(str_arg(path, "path"));
        match cli::load_scenario(path, &RunOptions::default()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ClairautScenarioHandle { inner }));
                ClairautStatus::Ok
            }
            Err(e) => fail(ClairautStatus::InvalidInput, e),
        }
    })
}

/// Parses scenario TOML held in memory.
///
/// # Safety
/// `text` and `name` must be valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_from_str(
    text: *const c_char,
    name: *const c_char,
    out: *mut *mut ClairautScenarioHandle,
) -> ClairautStatus {
    guard(|| {
        if out.is_null() {
            return fail(ClairautStatus::NullPointer, "out is null");
        }
        let text = try_status!(str_arg(text, "text"));
        let name = try_status!(str_arg(name, "name"));
        match cli::load_scenario_str(text, name, &RunOptions::default()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ClairautScenarioHandle { inner }));
                ClairautStatus::Ok
            }
            Err(e) => fail(ClairautStatus::InvalidInput, e),
        }
    })
}

/// Overrides seed, sample count and tolerance scale. A negative `seed`,
/// zero `samples` or non-positive `tolerance_scale` leaves that setting alone.
///
/// # Safety
/// `sc` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_configure(
    sc: *mut ClairautScenarioHandle,
    seed: i64,
    samples: usize,
    tolerance_scale: f64,
) -> ClairautStatus {
    guard(|| {
        let sc = match sc.as_mut() {
            Some(h) => h,
            None => return fail(ClairautStatus::NullPointer, "scenario is null"),
        };
        let opts = RunOptions {
            seed: u64::try_from(seed).ok(),
            samples: (samples > 0).then_some(samples),
            tolerance_scale: (tolerance_scale > 0.0).then_some(tolerance_scale),
        };
        match sc.inner.apply(&opts) {
            Ok(()) => ClairautStatus::Ok,
            Err(e) => fail(ClairautStatus::InvalidInput, e),
        }
    })
}

/// Dimension of the total space.
///
/// # Safety
/// `sc` must be null or a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_dim(sc: *const ClairautScenarioHandle) -> usize {
    sc.as_ref().map_or(0, |h| h.inner.scenario.dim())
}

/// Runs every check. On `OK` or `CHECK_FAILED`, `*report` receives the
/// rendered report (free with [`clairaut_string_free`]).
///
/// # Safety
/// `sc` must be a live scenario handle; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_run(
    sc: *const ClairautScenarioHandle,
    format: ClairautFormat,
    report: *mut *mut c_char,
) -> ClairautStatus {
    guard(|| {
        let sc = handle!(sc, "scenario");
        if report.is_null() {
            return fail(ClairautStatus::NullPointer, "report is null");
        }
        match cli::run_scenario(&sc.inner) {
            Ok(doc) => {
                let text = match format {
                    ClairautFormat::Human => doc.to_human(),
                    ClairautFormat::Machine => doc.to_machine(),
                };
                *report = into_c_string(text);
                if doc.passed() {
                    ClairautStatus::Ok
                } else {
                    set_error("one or more checks failed");
                    ClairautStatus::CheckFailed
                }
            }
            Err(e) => fail(ClairautStatus::RuntimeError, e),
        }
    })
}

/// # Safety
/// `sc` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn clairaut_scenario_free(sc: *mut ClairautScenarioHandle) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Integrates a geodesic from `p0` with velocity `v0`, both of length `dim`.
///
/// # Safety
/// `p0` and `v0` must point to `dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_geodesic(
    sc: *const ClairautScenarioHandle,
    p0: *const f64,
    v0: *const f64,
    dim: usize,
    length: f64,
    step: f64,
    out: *mut *mut ClairautTrajectory,
) -> ClairautStatus {
    guard(|| {
        let sc = handle!(sc, "scenario");
        if out.is_null() {
            return fail(ClairautStatus::NullPointer, "out is null");
        }
        let p0 = try_status!(slice_arg(p0, dim, "p0"));
        let v0 = try_status!(slice_arg(v0, dim, "v0"));
        match cli::integrate_geodesic(&sc.inner.scenario, p0, v0, length, step) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ClairautTrajectory { inner }));
                ClairautStatus::Ok
            }
            Err(e) => {
                let status = match e.source {
                    clairaut::Error::Dimension(_)
                    | clairaut::Error::InvalidArgument(_)
                    | clairaut::Error::OutsideDomain { .. } => ClairautStatus::InvalidInput,
                    _ => ClairautStatus::RuntimeError,
                };
                fail(status, e)
            }
        }
    })
}

/// # Safety
/// `t` must be null or a live trajectory handle.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_len(t: *const ClairautTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.trajectory.len())
}

/// Copies sample `index`. `point` and `velocity` may be null; otherwise they
/// must hold `dim` doubles. Scalar outputs may also be null.
///
/// # Safety
/// Pointers must be valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_sample(
    t: *const ClairautTrajectory,
    index: usize,
    s: *mut f64,
    point: *mut f64,
    velocity: *mut f64,
    sin_theta: *mut f64,
    invariant: *mut f64,
) -> ClairautStatus {
    guard(|| {
        let t = &handle!(t, "trajectory").inner;
        let (Some(sample), Some(inv)) = (t.trajectory.samples.get(index), t.invariant.samples.get(index)) else {
            return fail(
                ClairautStatus::InvalidInput,
                format!("index {index} out of range ({} samples)", t.trajectory.len()),
            );
        };
        if !s.is_null() {
            *s = sample.s;
        }
        if !point.is_null() {
            ptr::copy_nonoverlapping(sample.point.as_ptr(), point, sample.point.len());
        }
        if !velocity.is_null() {
            ptr::copy_nonoverlapping(sample.velocity.as_ptr(), velocity, sample.velocity.len());
        }
        if !sin_theta.is_null() {
            *sin_theta = inv.sin_theta;
        }
        if !invariant.is_null() {
            *invariant = inv.value;
        }
        ClairautStatus::Ok
    })
}

/// Relative drift of the Clairaut invariant and relative energy drift.
///
/// # Safety
/// `t` must be a live trajectory handle; outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_drift(
    t: *const ClairautTrajectory,
    invariant_drift: *mut f64,
    energy_drift: *mut f64,
) -> ClairautStatus {
    guard(|| {
        let t = &handle!(t, "trajectory").inner;
        if !invariant_drift.is_null() {
            *invariant_drift = t.invariant.relative_drift;
        }
        if !energy_drift.is_null() {
            *energy_drift = t.trajectory.energy_drift;
        }
        ClairautStatus::Ok
    })
}

/// Writes the trajectory as CSV.
///
/// # Safety
/// `t` must be a live trajectory handle; `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_write_csv(
    t: *const ClairautTrajectory,
    path: *const c_char,
) -> ClairautStatus {
    guard(|| {
        let t = &handle!(t, "trajectory").inner;
        let path = try_status!(str_arg(path, "path"));
        let file = match std::fs::File::create(path) {
            Ok(f) => f,
            Err(e) => return fail(ClairautStatus::InvalidInput, format!("{path}: {e}")),
        };
        match t.write_csv(file) {
            Ok(()) => ClairautStatus::Ok,
            Err(e) => fail(ClairautStatus::RuntimeError, e),
        }
    })
}

/// # Safety
/// `t` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_free(t: *mut ClairautTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Parses an expression in `dim` variables. On a syntax error `*position`
/// (if non-null) receives the 1-based character position.
///
/// # Safety
/// `text` must be a valid C string; `out` writable; `position` null or writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_expr_parse(
    text: *const c_char,
    dim: usize,
    out: *mut *mut ClairautExpr,
    position: *mut usize,
) -> ClairautStatus {
    guard(|| {
        if out.is_null() {
            return fail(ClairautStatus::NullPointer, "out is null");
        }
        let text = try_status!(str_arg(text, "text"));
        match clairaut::parse(text, dim) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(ClairautExpr { inner }));
                ClairautStatus::Ok
            }
            Err(e) => {
                if !position.is_null() {
                    *position = e.position;
                }
                fail(ClairautStatus::InvalidInput, e)
            }
        }
    })
}

/// # Safety
/// `e` must be a live expression; `point` must hold `len` doubles; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_expr_eval(
    e: *const ClairautExpr,
    point: *const f64,
    len: usize,
    value: *mut f64,
) -> ClairautStatus {
    guard(|| {
        let e = handle!(e, "expression");
        if value.is_null() {
            return fail(ClairautStatus::NullPointer, "value is null");
        }
        let p = try_status!(slice_arg(point, len, "point"));
        match e.inner.eval(p) {
            Ok(v) => {
                *value = v;
                ClairautStatus::Ok
            }
            Err(err) => fail(ClairautStatus::RuntimeError, err),
        }
    })
}

/// Symbolic partial derivative with respect to the zero-based variable `index`.
///
/// # Safety
/// `e` must be a live expression; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_expr_diff(
    e: *const ClairautExpr,
    index: usize,
    out: *mut *mut ClairautExpr,
) -> ClairautStatus {
    guard(|| {
        let e = handle!(e, "expression");
        if out.is_null() {
            return fail(ClairautStatus::NullPointer, "out is null");
        }
        *out = Box::into_raw(Box::new(ClairautExpr {
            inner: e.inner.diff(index),
        }));
        ClairautStatus::Ok
    })
}

/// Fully parenthesised text of the expression, or null on a null handle.
///
/// # Safety
/// `e` must be null or a live expression.
#[no_mangle]
pub unsafe extern "C" fn clairaut_expr_to_string(e: *const ClairautExpr) -> *mut c_char {
    match e.as_ref() {
        Some(e) => into_c_string(e.inner.to_string()),
        None => {
            set_error("expression is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `e` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn clairaut_expr_free(e: *mut ClairautExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Preset catalog, one per line. Free with [`clairaut_string_free`].
#[no_mangle]
pub extern "C" fn clairaut_presets() -> *mut c_char {
    into_c_string(cli::list_presets())
}

/// Non-zero when `status` means the call produced its outputs.
#[no_mangle]
pub extern "C" fn clairaut_status_has_output(status: ClairautStatus) -> c_int {
    matches!(status, ClairautStatus::Ok | ClairautStatus::CheckFailed) as c_int
}
