//! C ABI for the strip solver: opaque handles, status codes, and a small
//! evaluation/report surface so other languages can bind without touching
//! Rust types. Every fallible entry point catches panics at the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use striph::basis::biortho_gram;
use striph::quad::ScalarFunction1D;
use striph::report;
use striph::solver::{calibrate_lambda, calibration_grid, solve, BoundaryDatum, SolverError, StripSolution};
use striph::weights::{full_report, Weight, WeightError};
use striph::{presets, verify};

/// Status codes mirroring the CLI exit codes, plus argument validation.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StriphStatus {
    Ok = 0,
    /// a measured quantity violated its gate
    Contract = 1,
    /// bad arguments, unknown preset or spec
    Config = 2,
    /// quadrature failure, divergent weight, inconclusive calibration
    Numerical = 3,
    /// a required pointer was null
    NullArgument = 4,
}

/// Opaque boundary datum handle.
pub struct StriphFunction {
    inner: ScalarFunction1D,
}

/// Opaque weight handle.
pub struct StriphWeight {
    inner: Weight,
}

/// Opaque solution handle.
pub struct StriphSolution {
    inner: StripSolution,
}

/// Muckenhoupt analysis result; optional fields are paired with `has_` flags.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct StriphWeightReport {
    pub p: f64,
    pub ap_constant: f64,
    pub in_ap: bool,
    pub has_inclusion_q: bool,
    pub inclusion_q: f64,
    pub has_reverse_holder: bool,
    pub rh_delta: f64,
    pub rh_constant: f64,
    pub resolution: u32,
}

fn solver_status(e: &SolverError) -> StriphStatus {
    match e {
        SolverError::BadBoundary { .. } | SolverError::NonzeroH(_) => StriphStatus::Config,
        _ => StriphStatus::Numerical,
    }
}

fn weight_status(e: &WeightError) -> StriphStatus {
    match e {
        WeightError::BadSpec(_) => StriphStatus::Config,
        _ => StriphStatus::Numerical,
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn guarded(body: impl FnOnce() -> StriphStatus) -> StriphStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => StriphStatus::Numerical,
    }
}

/// Look up a boundary datum preset (`xsinx`, `sinx`, `poly`).
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns a handle to release with
/// [`striph_function_free`].
#[no_mangle]
pub unsafe extern "C" fn striph_function_preset(
    name: *const c_char,
    out: *mut *mut StriphFunction,
) -> StriphStatus {
    if out.is_null() {
        return StriphStatus::NullArgument;
    }
    let Some(name) = utf8_arg(name) else {
        return StriphStatus::NullArgument;
    };
    match presets::boundary_preset(name) {
        Some(f) => {
            *out = Box::into_raw(Box::new(StriphFunction { inner: f }));
            StriphStatus::Ok
        }
        None => StriphStatus::Config,
    }
}

/// # Safety
/// `ptr` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn striph_function_free(ptr: *mut StriphFunction) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Parse a weight spec (`one`, `power:alpha=<a>`, `shifted:c=<c>`).
///
/// # Safety
/// `spec` must be a valid NUL-terminated string; `out` must be valid. On
/// success `*out` owns a handle to release with [`striph_weight_free`].
#[no_mangle]
pub unsafe extern "C" fn striph_weight_parse(
    spec: *const c_char,
    out: *mut *mut StriphWeight,
) -> StriphStatus {
    if out.is_null() {
        return StriphStatus::NullArgument;
    }
    let Some(spec) = utf8_arg(spec) else {
        return StriphStatus::NullArgument;
    };
    match Weight::from_spec(spec) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(StriphWeight { inner: w }));
            StriphStatus::Ok
        }
        Err(e) => weight_status(&e),
    }
}

/// # Safety
/// `ptr` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn striph_weight_free(ptr: *mut StriphWeight) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Muckenhoupt constant estimation plus reverse-Hölder probe.
///
/// # Safety
/// `w` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn striph_weight_report(
    w: *const StriphWeight,
    p: f64,
    resolution: u32,
    out: *mut StriphWeightReport,
) -> StriphStatus {
    if w.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    if !(p > 1.0 && p.is_finite()) || resolution < 8 {
        return StriphStatus::Config;
    }
    let weight = &(*w).inner;
    guarded(|| match full_report(weight, p, resolution as usize) {
        Ok(r) => {
            *out = StriphWeightReport {
                p: r.p,
                ap_constant: r.ap_constant,
                in_ap: r.in_ap,
                has_inclusion_q: r.inclusion_q.is_some(),
                inclusion_q: r.inclusion_q.unwrap_or(0.0),
                has_reverse_holder: r.rh_delta.is_some(),
                rh_delta: r.rh_delta.unwrap_or(0.0),
                rh_constant: r.rh_constant.unwrap_or(0.0),
                resolution: r.resolution as u32,
            };
            StriphStatus::Ok
        }
        Err(e) => weight_status(&e),
    })
}

/// Build the truncated series solution with an explicit growth multiplier.
///
/// # Safety
/// `f` and `out` must be valid pointers. On success `*out` owns a handle to
/// release with [`striph_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn striph_solve(
    f: *const StriphFunction,
    n_modes: u32,
    lambda: f64,
    tol: f64,
    out: *mut *mut StriphSolution,
) -> StriphStatus {
    if f.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    if n_modes < 1 || !(tol > 0.0) || !lambda.is_finite() {
        return StriphStatus::Config;
    }
    let datum = BoundaryDatum::new((*f).inner.clone());
    guarded(|| match solve(&datum, n_modes as usize, lambda, tol) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(StriphSolution { inner: sol }));
            StriphStatus::Ok
        }
        Err(e) => solver_status(&e),
    })
}

/// Build the solution with the growth multiplier picked by the
/// finite-difference calibration; the chosen value lands in `lambda_out`
/// when that pointer is non-null.
///
/// # Safety
/// `f` and `out` must be valid pointers; `lambda_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn striph_solve_calibrated(
    f: *const StriphFunction,
    n_modes: u32,
    tol: f64,
    out: *mut *mut StriphSolution,
    lambda_out: *mut f64,
) -> StriphStatus {
    if f.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    if n_modes < 1 || !(tol > 0.0) {
        return StriphStatus::Config;
    }
    let datum = BoundaryDatum::new((*f).inner.clone());
    guarded(|| {
        let cal = match calibrate_lambda(&datum, &calibration_grid()) {
            Ok(cal) => cal,
            Err(e) => return solver_status(&e),
        };
        match solve(&datum, n_modes as usize, cal.lambda, tol) {
            Ok(sol) => {
                *out = Box::into_raw(Box::new(StriphSolution { inner: sol }));
                if !lambda_out.is_null() {
                    *lambda_out = cal.lambda;
                }
                StriphStatus::Ok
            }
            Err(e) => solver_status(&e),
        }
    })
}

/// # Safety
/// `ptr` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_free(ptr: *mut StriphSolution) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// # Safety
/// `sol` must be a valid solution handle.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_modes(sol: *const StriphSolution) -> u32 {
    if sol.is_null() {
        return 0;
    }
    (*sol).inner.modes() as u32
}

/// # Safety
/// `sol` must be a valid solution handle.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_lambda(sol: *const StriphSolution) -> f64 {
    if sol.is_null() {
        return f64::NAN;
    }
    (*sol).inner.lambda()
}

/// Field value at a point; NaN on a null handle.
///
/// # Safety
/// `sol` must be a valid solution handle.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_eval(sol: *const StriphSolution, x: f64, y: f64) -> f64 {
    if sol.is_null() {
        return f64::NAN;
    }
    (*sol).inner.eval_u(x, y)
}

/// Writes `u, u_x, u_y, u_xx, u_yy` at a point into `out[0..5]`.
///
/// # Safety
/// `sol` must be valid and `out` must point to at least five doubles.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_eval_field(
    sol: *const StriphSolution,
    x: f64,
    y: f64,
    out: *mut f64,
) -> StriphStatus {
    if sol.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    let s = &(*sol).inner;
    let values = [
        s.eval_u(x, y),
        s.eval_ux(x, y),
        s.eval_uy(x, y),
        s.eval_uxx(x, y),
        s.eval_uyy(x, y),
    ];
    std::ptr::copy_nonoverlapping(values.as_ptr(), out, 5);
    StriphStatus::Ok
}

/// Upper bound on the dropped series tail at height `y`.
///
/// # Safety
/// `sol` must be a valid solution handle.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_tail_estimate(sol: *const StriphSolution, y: f64) -> f64 {
    if sol.is_null() {
        return f64::NAN;
    }
    (*sol).inner.tail_estimate(y)
}

/// Max absolute periodicity gap and left-edge x-derivative over a height
/// ladder, written into `out[0..2]`; both are structural zeros for solved
/// fields.
///
/// # Safety
/// `sol` must be valid and `out` must point to at least two doubles.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_boundary_gaps(
    sol: *const StriphSolution,
    out: *mut f64,
) -> StriphStatus {
    if sol.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    let s = &(*sol).inner;
    let mut periodicity = 0.0f64;
    let mut edge = 0.0f64;
    for &y in &verify::trace_ladder() {
        periodicity = periodicity.max((s.eval_u(0.0, y) - s.eval_u(striph::quad::TWO_PI, y)).abs());
        edge = edge.max(s.eval_ux(0.0, y).abs());
    }
    *out = periodicity;
    *out.add(1) = edge;
    StriphStatus::Ok
}

/// Serialize the solution; the returned string is released with
/// [`striph_string_free`].
///
/// # Safety
/// `sol` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn striph_solution_to_json(
    sol: *const StriphSolution,
    out: *mut *mut c_char,
) -> StriphStatus {
    if sol.is_null() || out.is_null() {
        return StriphStatus::NullArgument;
    }
    let doc = report::solution_to_json(&(*sol).inner);
    match CString::new(doc) {
        Ok(s) => {
            *out = s.into_raw();
            StriphStatus::Ok
        }
        Err(_) => StriphStatus::Numerical,
    }
}

/// Rebuild a solution from its JSON document.
///
/// # Safety
/// `doc` must be a valid NUL-terminated string; `out` must be valid. On
/// success `*out` owns a handle to release with [`striph_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn striph_solution_from_json(
    doc: *const c_char,
    out: *mut *mut StriphSolution,
) -> StriphStatus {
    if out.is_null() {
        return StriphStatus::NullArgument;
    }
    let Some(doc) = utf8_arg(doc) else {
        return StriphStatus::NullArgument;
    };
    match report::solution_from_json(doc) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(StriphSolution { inner: sol }));
            StriphStatus::Ok
        }
        Err(_) => StriphStatus::Config,
    }
}

/// # Safety
/// `s` must have been returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn striph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Max deviation of the order-`n` pairing matrix from the identity, written
/// into `out`; the biorthonormality gate is `1e-8`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn striph_gram_max_deviation(n: u32, tol: f64, out: *mut f64) -> StriphStatus {
    if out.is_null() {
        return StriphStatus::NullArgument;
    }
    if n < 1 || !(tol > 0.0) {
        return StriphStatus::Config;
    }
    guarded(|| match biortho_gram(n as usize, tol) {
        Ok(g) => {
            let dev = g.max_identity_deviation();
            *out = dev;
            if dev <= 1e-8 {
                StriphStatus::Ok
            } else {
                StriphStatus::Contract
            }
        }
        Err(_) => StriphStatus::Numerical,
    })
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn striph_status_name(status: StriphStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        StriphStatus::Ok => b"ok\0",
        StriphStatus::Contract => b"contract violation\0",
        StriphStatus::Config => b"config error\0",
        StriphStatus::Numerical => b"numerical failure\0",
        StriphStatus::NullArgument => b"null argument\0",
    };
    name.as_ptr() as *const c_char
}
