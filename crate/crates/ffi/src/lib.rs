//! C interface to the viscous-shock library.
//!
//! Scenarios and trajectories are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`VsStatus`]; on failure [`vs_last_error`] describes what went wrong on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use viscous_shock::admissibility::{verdict_for, Condition, Verdict, VerdictOptions};
use viscous_shock::characteristics::{characteristic_speeds, classify_local, LocalParams, ShockRegime};
use viscous_shock::cli::{parse_scenario, Scenario};
use viscous_shock::error::Error;
use viscous_shock::phaseplane::field;
use viscous_shock::profile::{shoot_profile, ProfileTrajectory};
use viscous_shock::shock::{
    find_rest_points, polish_rest_point, upstream_constants, PhasePoint, UpstreamConstants,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Unphysical = 5,
    Degenerate = 6,
    Numerical = 7,
    BufferTooSmall = 8,
    OutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VsRegime {
    Fast = 0,
    Slow = 1,
    NotEvolutionary = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VsVerdictKind {
    Admissible = 0,
    NotAdmissible = 1,
    Degenerate = 2,
}

/// Failed conditions as bits: A = 1, B = 2, C = 4, D = 8.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsVerdict {
    pub kind: VsVerdictKind,
    pub failed: u32,
    pub regime: VsRegime,
    pub target_y: f64,
    pub target_v: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsPoint {
    pub y: f64,
    pub v: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsSpeeds {
    pub u_sl: f64,
    pub u_a: f64,
    pub u_a_star: f64,
    pub u_f: f64,
    pub u1: f64,
    pub regime: VsRegime,
}

/// Fluxes fixed by the upstream state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsConstants {
    pub t1: [f64; 3],
    pub h: [f64; 4],
    pub j: f64,
    pub mu_over_4pi: f64,
    pub y0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsProfilePoint {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub p: f64,
    pub eps: f64,
    pub n: f64,
    pub s: f64,
}

/// A parsed scenario with its upstream constants.
pub struct VsScenario {
    scenario: Scenario,
    constants: UpstreamConstants,
}

/// A computed profile.
pub struct VsTrajectory {
    inner: ProfileTrajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> VsStatus {
    match e {
        Error::Parse { .. } => VsStatus::Parse,
        Error::Validation { .. }
        | Error::Io(_)
        | Error::NonPositiveInput(_)
        | Error::CausalityViolation(_)
        | Error::InvalidEos(_)
        | Error::InvalidState(_) => VsStatus::Validation,
        Error::UnphysicalPoint { .. } => VsStatus::Unphysical,
        Error::DegenerateField(_) | Error::DegeneratePoint(_) | Error::DegenerateConfiguration(_) => {
            VsStatus::Degenerate
        }
        _ => VsStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), (VsStatus, String)>>(f: F) -> VsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            VsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VsStatus::Panic
        }
    }
}

fn lift<T>(r: viscous_shock::Result<T>) -> Result<T, (VsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (VsStatus, String) {
    (VsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn scenario_ref<'a>(s: *const VsScenario) -> Result<&'a VsScenario, (VsStatus, String)> {
    s.as_ref().ok_or_else(|| null("scenario"))
}

fn regime_of(r: ShockRegime) -> VsRegime {
    match r {
        ShockRegime::Fast => VsRegime::Fast,
        ShockRegime::Slow => VsRegime::Slow,
        ShockRegime::NotEvolutionary => VsRegime::NotEvolutionary,
    }
}

fn local(s: &VsScenario) -> Result<LocalParams, (VsStatus, String)> {
    lift(LocalParams::from_state(&s.constants.upstream, &s.constants.eos))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn vs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses scenario text (the CLI's INI format) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_scenario_parse(text: *const c_char, out: *mut *mut VsScenario) -> VsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (VsStatus::InvalidUtf8, e.to_string()))?;
        let scenario = lift(parse_scenario(text))?;
        let state = lift(scenario.fluid_state())?;
        let constants = lift(upstream_constants(&state, &scenario.eos))?;
        *out = Box::into_raw(Box::new(VsScenario { scenario, constants }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`vs_scenario_parse`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vs_scenario_free(s: *mut VsScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live scenario and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_scenario_constants(s: *const VsScenario, out: *mut VsConstants) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = &s.constants;
        *out = VsConstants {
            t1: c.t1,
            h: c.h.0,
            j: c.j,
            mu_over_4pi: c.mu_over_4pi,
            y0: c.y0(),
        };
        Ok(())
    })
}

/// Characteristic speeds and regime of the upstream state.
///
/// # Safety
/// `s` must be a live scenario and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_speeds(s: *const VsScenario, out: *mut VsSpeeds) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let l = local(s)?;
        let sp = lift(characteristic_speeds(&l))?;
        let y0 = s.constants.y0();
        *out = VsSpeeds {
            u_sl: sp.u_sl,
            u_a: sp.u_a,
            u_a_star: sp.u_a_star,
            u_f: sp.u_f,
            u1: y0,
            regime: regime_of(classify_local(y0, &l)),
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be a live scenario and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_regime(s: *const VsScenario, out: *mut VsRegime) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = regime_of(classify_local(s.constants.y0(), &local(s)?));
        Ok(())
    })
}

/// `(F1, F2)` at `(y, v)`, written to `out[0]` and `out[1]`.
///
/// # Safety
/// `s` must be a live scenario and `out` must point to two doubles.
#[no_mangle]
pub unsafe extern "C" fn vs_field(s: *const VsScenario, y: f64, v: f64, out: *mut f64) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = lift(field(&s.constants, PhasePoint::new(y, v)))?;
        *out = f[0];
        *out.add(1) = f[1];
        Ok(())
    })
}

/// Rest points inside the scenario's search box, sorted by `y`.
///
/// `*len` receives the number found. When it exceeds `cap` nothing is
/// written to `out` and [`VsStatus::BufferTooSmall`] is returned, so a call
/// with `cap = 0` sizes the buffer.
///
/// # Safety
/// `s` must be a live scenario, `len` a valid pointer and `out` valid for
/// `cap` elements (may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn vs_rest_points(
    s: *const VsScenario,
    out: *mut VsPoint,
    cap: usize,
    len: *mut usize,
) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        let c = &s.constants;
        let rp = lift(find_rest_points(
            c,
            s.scenario.search_box(c),
            s.scenario.numerics.grid_n,
        ))?;
        *len = rp.points.len();
        if rp.points.len() > cap {
            return Err((
                VsStatus::BufferTooSmall,
                format!("{} rest points, buffer holds {cap}", rp.points.len()),
            ));
        }
        if out.is_null() && !rp.points.is_empty() {
            return Err(null("out"));
        }
        for (k, p) in rp.points.iter().enumerate() {
            *out.add(k) = VsPoint { y: p.y, v: p.v };
        }
        Ok(())
    })
}

fn target_of(s: &VsScenario, y: f64, v: f64) -> Result<PhasePoint, (VsStatus, String)> {
    lift(polish_rest_point(&s.constants, PhasePoint::new(y, v)))
}

/// Admissibility of the transition from `"0"` to the rest point nearest
/// `(y, v)`.
///
/// # Safety
/// `s` must be a live scenario and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_verdict(s: *const VsScenario, y: f64, v: f64, out: *mut VsVerdict) -> VsStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let target = target_of(s, y, v)?;
        let opts = VerdictOptions {
            grid_n: s.scenario.numerics.grid_n,
            ..VerdictOptions::default()
        };
        let rep = lift(verdict_for(&s.constants, target, &opts))?;
        let (kind, failed) = match &rep.verdict {
            Verdict::AdmissibleUniqueProfile => (VsVerdictKind::Admissible, 0),
            Verdict::NotAdmissible(list) => (
                VsVerdictKind::NotAdmissible,
                list.iter().fold(0u32, |m, c| {
                    m | match c {
                        Condition::A => 1,
                        Condition::B => 2,
                        Condition::C => 4,
                        Condition::D => 8,
                    }
                }),
            ),
            Verdict::Degenerate(_) => (VsVerdictKind::Degenerate, 4),
        };
        *out = VsVerdict {
            kind,
            failed,
            regime: regime_of(rep.condition_d),
            target_y: target.y,
            target_v: target.v,
        };
        Ok(())
    })
}

/// Integrates the profile from `"0"` to the rest point nearest `(y, v)`
/// with the scenario's viscosities and tolerances.
///
/// # Safety
/// `s` must be a live scenario and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_profile(
    s: *const VsScenario,
    y: f64,
    v: f64,
    out: *mut *mut VsTrajectory,
) -> VsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = scenario_ref(s)?;
        let c = &s.constants;
        let target = target_of(s, y, v)?;
        let regime = classify_local(c.y0(), &local(s)?);
        let tr = lift(shoot_profile(
            c,
            &s.scenario.viscosity,
            c.origin(),
            target,
            regime,
            &s.scenario.shoot_options(),
        ))?;
        *out = Box::into_raw(Box::new(VsTrajectory { inner: tr }));
        Ok(())
    })
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn vs_trajectory_len(t: *const VsTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.points.len())
}

/// Distance between the end of the integration and its target rest point.
///
/// # Safety
/// `t` must be null or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn vs_trajectory_endpoint_distance(t: *const VsTrajectory) -> f64 {
    t.as_ref().map_or(f64::NAN, |t| t.inner.endpoint_distance)
}

/// # Safety
/// `t` must be a live trajectory and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vs_trajectory_get(
    t: *const VsTrajectory,
    index: usize,
    out: *mut VsProfilePoint,
) -> VsStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("trajectory"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = t.inner.points.get(index).ok_or_else(|| {
            (
                VsStatus::OutOfRange,
                format!("index {index} past {} samples", t.inner.points.len()),
            )
        })?;
        *out = VsProfilePoint {
            x: p.x,
            y: p.pt.y,
            v: p.pt.v,
            p: p.p,
            eps: p.eps,
            n: p.n,
            s: p.s,
        };
        Ok(())
    })
}

/// # Safety
/// `t` must come from [`vs_profile`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vs_trajectory_free(t: *mut VsTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
