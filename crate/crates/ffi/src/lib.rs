//! C ABI for the sosdyn library.
//!
//! Handles are opaque pointers created and destroyed here; every
//! function returns a [`SosStatus`] and writes results through out
//! pointers. Structured results (spectra, boundary-law reports) come
//! back as heap-allocated JSON strings released with
//! [`sosdyn_string_free`].
//!
//! Pointer contract, shared by every entry point: handle arguments
//! must be live pointers obtained from this library (or null, which
//! yields `NullArgument`), out parameters must be writable, and
//! nothing is freed twice.
#![allow(clippy::missing_safety_doc)]

use std::collections::BTreeMap;
use std::ffi::{c_char, CString};

use sosdyn::lab;
use sosdyn::law::{BoundaryLaw, LawKind};
use sosdyn::map::{self, ModelParams, State, Trajectory};
use sosdyn::{Error, Field};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SosStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidOrder = 2,
    InvalidTau = 3,
    InitialCondition = 4,
    NonpositiveInitial = 5,
    NotConstantField = 6,
    ConditionNotSatisfied = 7,
    InvalidField = 8,
    Overflow = 9,
    Underflow = 10,
    SpinOutOfRange = 11,
    ParseError = 12,
    IoError = 13,
    IndexOutOfRange = 14,
}

fn status_of(e: &Error) -> SosStatus {
    match e {
        Error::InvalidOrder(_) => SosStatus::InvalidOrder,
        Error::InvalidTau(_) => SosStatus::InvalidTau,
        Error::InitialConditionViolated { .. } => SosStatus::InitialCondition,
        Error::NonpositiveInitial { .. } => SosStatus::NonpositiveInitial,
        Error::NotConstantField => SosStatus::NotConstantField,
        Error::ConditionNotSatisfied => SosStatus::ConditionNotSatisfied,
        Error::InvalidFieldSpec(_) => SosStatus::InvalidField,
        Error::Overflow(_) => SosStatus::Overflow,
        Error::DenominatorUnderflow => SosStatus::Underflow,
        Error::SpinOutOfRange(_) => SosStatus::SpinOutOfRange,
        Error::Parse(_) => SosStatus::ParseError,
        Error::Io(_) => SosStatus::IoError,
    }
}

/// Opaque parameter handle.
pub struct SosParams(ModelParams);

/// Opaque trajectory handle.
pub struct SosTrajectory(Trajectory);

unsafe fn write_out<T>(out: *mut T, value: T) -> SosStatus {
    if out.is_null() {
        return SosStatus::NullArgument;
    }
    unsafe { out.write(value) };
    SosStatus::Ok
}

fn new_params_with_field(
    k: u32,
    tau: f64,
    field: Result<Field, Error>,
    y0: f64,
    x1: f64,
    out: *mut *mut SosParams,
) -> SosStatus {
    if out.is_null() {
        return SosStatus::NullArgument;
    }
    let field = match field {
        Ok(f) => f,
        Err(e) => return status_of(&e),
    };
    match ModelParams::new(k, tau, field, y0, x1) {
        Ok(p) => unsafe { write_out(out, Box::into_raw(Box::new(SosParams(p)))) },
        Err(e) => status_of(&e),
    }
}

/// Validated parameters with a constant field `h`.
#[no_mangle]
pub extern "C" fn sosdyn_params_new(
    k: u32,
    tau: f64,
    h: f64,
    y0: f64,
    x1: f64,
    out: *mut *mut SosParams,
) -> SosStatus {
    new_params_with_field(k, tau, Field::constant(h), y0, x1, out)
}

/// Parameters with `h(0) = 1` and a different constant on every other
/// height (the non-uniform worked case).
#[no_mangle]
pub extern "C" fn sosdyn_params_new_unit_zero_tail(
    k: u32,
    tau: f64,
    h_tail: f64,
    y0: f64,
    x1: f64,
    out: *mut *mut SosParams,
) -> SosStatus {
    let mut values = BTreeMap::new();
    values.insert(0i64, 1.0f64);
    new_params_with_field(k, tau, Field::table(values, h_tail), y0, x1, out)
}

/// Releases a parameter handle. Safe on null.
///
/// # Safety
/// `p` must be a pointer previously returned through a `sosdyn_params_new*`
/// out parameter and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_params_free(p: *mut SosParams) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => return SosStatus::NullArgument,
        }
    };
}

/// The root of `θ + 1/θ = τ` in (0, 1).
#[no_mangle]
pub unsafe extern "C" fn sosdyn_params_theta(p: *const SosParams, out: *mut f64) -> SosStatus {
    let p = deref!(p);
    unsafe { write_out(out, p.0.theta()) }
}

/// The cached map coefficient `y0 + x1 − τ`.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_params_coeff0(p: *const SosParams, out: *mut f64) -> SosStatus {
    let p = deref!(p);
    unsafe { write_out(out, p.0.coeff0()) }
}

/// One forward step of the planar map using the field value at `n`.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_step_forward(
    p: *const SosParams,
    x: f64,
    y: f64,
    n: u64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> SosStatus {
    let p = deref!(p);
    if out_x.is_null() || out_y.is_null() {
        return SosStatus::NullArgument;
    }
    match map::step_forward(&p.0, State::new(x, y), n as usize) {
        Ok(s) => unsafe {
            out_x.write(s.x);
            out_y.write(s.y);
            SosStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// One backward step (the algebraic inverse of the forward step).
#[no_mangle]
pub unsafe extern "C" fn sosdyn_step_backward(
    p: *const SosParams,
    x: f64,
    y: f64,
    n: u64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> SosStatus {
    let p = deref!(p);
    if out_x.is_null() || out_y.is_null() {
        return SosStatus::NullArgument;
    }
    match map::step_backward(&p.0, State::new(x, y), n as usize) {
        Ok(s) => unsafe {
            out_x.write(s.x);
            out_y.write(s.y);
            SosStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Forward orbit of `(x1, 1)`; the handle owns the points.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_iterate(
    p: *const SosParams,
    n_steps: u64,
    out: *mut *mut SosTrajectory,
) -> SosStatus {
    let p = deref!(p);
    if out.is_null() {
        return SosStatus::NullArgument;
    }
    let t = map::iterate(&p.0, n_steps as usize);
    unsafe { write_out(out, Box::into_raw(Box::new(SosTrajectory(t)))) }
}

/// Number of points in the trajectory (steps + 1 unless it escaped).
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_len(
    t: *const SosTrajectory,
    out: *mut usize,
) -> SosStatus {
    let t = deref!(t);
    unsafe { write_out(out, t.0.points.len()) }
}

/// Point at `index`.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_point(
    t: *const SosTrajectory,
    index: usize,
    out_x: *mut f64,
    out_y: *mut f64,
) -> SosStatus {
    let t = deref!(t);
    if out_x.is_null() || out_y.is_null() {
        return SosStatus::NullArgument;
    }
    match t.0.points.get(index) {
        Some(s) => unsafe {
            out_x.write(s.x);
            out_y.write(s.y);
            SosStatus::Ok
        },
        None => SosStatus::IndexOutOfRange,
    }
}

/// First index with `x ≤ 0`, or −1 when positivity held.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_first_nonpositive(
    t: *const SosTrajectory,
    out: *mut i64,
) -> SosStatus {
    let t = deref!(t);
    unsafe { write_out(out, t.0.first_nonpositive.map_or(-1, |m| m as i64)) }
}

/// Index whose `|x|` exceeded the escape bound, or −1.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_escaped_at(
    t: *const SosTrajectory,
    out: *mut i64,
) -> SosStatus {
    let t = deref!(t);
    unsafe { write_out(out, t.0.escaped_at.map_or(-1, |m| m as i64)) }
}

/// Max `|x|` along the trajectory.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_max_abs(
    t: *const SosTrajectory,
    out: *mut f64,
) -> SosStatus {
    let t = deref!(t);
    unsafe { write_out(out, t.0.max_abs) }
}

/// Releases a trajectory handle. Safe on null.
///
/// # Safety
/// `t` must come from `sosdyn_iterate` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_trajectory_free(t: *mut SosTrajectory) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// First step with `x ≤ 0` within `n_max` steps, or −1.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_positivity_horizon(
    p: *const SosParams,
    n_max: u64,
    out: *mut i64,
) -> SosStatus {
    let p = deref!(p);
    unsafe {
        write_out(
            out,
            map::positivity_horizon(&p.0, n_max as usize).map_or(-1, |m| m as i64),
        )
    }
}

/// Coordinate of the interior fixed point `(x*, x*)`.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_interior_fixed_point(
    p: *const SosParams,
    out: *mut f64,
) -> SosStatus {
    let p = deref!(p);
    match sosdyn::spectral::fixed_points(&p.0) {
        Ok((_, p1)) => unsafe { write_out(out, p1.location.x) },
        Err(e) => status_of(&e),
    }
}

unsafe fn out_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> SosStatus {
    if out.is_null() {
        return SosStatus::NullArgument;
    }
    let text = serde_json::to_string(value).expect("report serialization");
    match CString::new(text) {
        Ok(s) => unsafe { write_out(out, s.into_raw()) },
        Err(_) => SosStatus::ParseError,
    }
}

/// Fixed points, eigenvalues, regimes and resonances as a JSON string.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_spectral_report_json(
    p: *const SosParams,
    out: *mut *mut c_char,
) -> SosStatus {
    let p = deref!(p);
    match lab::spectral_json(&p.0) {
        Ok(j) => unsafe { out_json(&j, out) },
        Err(e) => status_of(&e),
    }
}

/// Invariant-region scalars plus the grid containment check as JSON.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_invariant_set_json(
    p: *const SosParams,
    grid_n: usize,
    out: *mut *mut c_char,
) -> SosStatus {
    let p = deref!(p);
    match lab::invariant_set_json(&p.0, Some(grid_n)) {
        Ok(j) => unsafe { out_json(&j, out) },
        Err(e) => status_of(&e),
    }
}

/// Law families addressable over the ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SosLawKind {
    LeftInfinite = 0,
    RightInfinite = 1,
    BothInfinite = 2,
}

/// Boundary-law report (z-window, condition verdicts, residuals,
/// normalisability) for the normalized geometric field, as JSON.
/// `rho` is read for `BothInfinite` only.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_boundary_law_report_json(
    kind: SosLawKind,
    theta: f64,
    k: u32,
    rho: f64,
    imax: i64,
    trunc_n: usize,
    out: *mut *mut c_char,
) -> SosStatus {
    let field = match Field::geometric_normalized(theta) {
        Ok(f) => f,
        Err(e) => return status_of(&e),
    };
    let law_kind = match kind {
        SosLawKind::LeftInfinite => LawKind::LeftInfinite,
        SosLawKind::RightInfinite => LawKind::RightInfinite,
        SosLawKind::BothInfinite => LawKind::BothInfinite { rho },
    };
    let law = match BoundaryLaw::new(law_kind, theta, k, field) {
        Ok(l) => l,
        Err(e) => return status_of(&e),
    };
    match lab::boundary_law_json(&law, imax, trunc_n) {
        Ok(j) => unsafe { out_json(&j, out) },
        Err(e) => status_of(&e),
    }
}

/// Releases a string returned by the `*_json` functions. Safe on null.
///
/// # Safety
/// `s` must originate from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sosdyn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Static library version string.
#[no_mangle]
pub extern "C" fn sosdyn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
