//! C ABI for `tsconsensus`.
//!
//! Every function returns a [`TscStatus`]; on failure a message is available
//! from [`tsc_last_error`] on the same thread. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`tsc_string_free`]. Scenario handles are released with [`tsc_scenario_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tsconsensus::certify::certify;
use tsconsensus::scenario::{Scenario, ScenarioError};
use tsconsensus::simulate::{SimulateError, Simulator};
use tsconsensus::spectral::{SpectralError, TsExponential};
use tsconsensus::system::SystemError;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    NumericalError = 5,
    UnknownExample = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque scenario handle.
pub struct TscScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(TscStatus, String);

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        let code = match &e {
            ScenarioError::Parse { .. } | ScenarioError::Io { .. } => TscStatus::ParseError,
            ScenarioError::UnknownExample(_) => TscStatus::UnknownExample,
            ScenarioError::System(SystemError::Spectral(s)) => spectral_code(s),
            _ => TscStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

impl From<SimulateError> for Failure {
    fn from(e: SimulateError) -> Self {
        let code = match &e {
            SimulateError::UnboundedWindow | SimulateError::SingularDynamics(_) => TscStatus::InvalidInput,
            SimulateError::Spectral(s) => spectral_code(s),
            _ => TscStatus::NumericalError,
        };
        Failure(code, e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        Failure(spectral_code(&e), e.to_string())
    }
}

fn spectral_code(e: &SpectralError) -> TscStatus {
    match e {
        SpectralError::NoConvergence { .. } | SpectralError::NonRegressive { .. } => TscStatus::NumericalError,
        _ => TscStatus::InvalidInput,
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, records its error message, and converts panics into `Panic`.
fn guard<F>(f: F) -> TscStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TscStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            TscStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TscStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(TscStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn scenario_ref<'a>(p: *const TscScenario) -> Result<&'a Scenario, Failure> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| Failure(TscStatus::NullPointer, "scenario handle is null".into()))
}

unsafe fn check_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(TscStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TscStatus::NumericalError, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn emit_scenario(out: *mut *mut TscScenario, s: Scenario) {
    *out = Box::into_raw(Box::new(TscScenario { inner: s }));
}

/// Parses a scenario from JSON text. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsc_scenario_from_json(json: *const c_char, out: *mut *mut TscScenario) -> TscStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let s = Scenario::from_json(text, "json")?;
        s.window()?;
        s.system()?;
        emit_scenario(out, s);
        Ok(())
    })
}

/// Loads a built-in scenario by name (`ex5`, `steady_gain`, ...).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsc_scenario_builtin(name: *const c_char, out: *mut *mut TscScenario) -> TscStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = ptr::null_mut();
        let s = Scenario::builtin(read_str(name, "name")?)?;
        emit_scenario(out, s);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tsc_scenario_free(s: *mut TscScenario) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(s))));
    }
}

/// Replaces the truncation horizon. The scenario is left unchanged on error.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tsc_scenario_set_horizon(s: *mut TscScenario, horizon: f64) -> TscStatus {
    guard(|| {
        let handle = s
            .as_mut()
            .ok_or_else(|| Failure(TscStatus::NullPointer, "scenario handle is null".into()))?;
        if !horizon.is_finite() {
            return Err(Failure(TscStatus::InvalidInput, format!("horizon {horizon} is not finite")));
        }
        let mut next = handle.inner.clone();
        next.horizon = Some(horizon);
        next.window()?;
        handle.inner = next;
        Ok(())
    })
}

/// Segment decomposition of the windowed time scale as JSON.
///
/// # Safety
/// `s` must be a valid handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsc_decompose(s: *const TscScenario, out_json: *mut *mut c_char) -> TscStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        *out_json = ptr::null_mut();
        let d = scenario_ref(s)?.window()?.decompose();
        emit_string(out_json, serde_json::to_string(&d).expect("decomposition serializes"))
    })
}

/// Stability certificate as JSON; `*out_stable` is 1 when a route certifies.
///
/// # Safety
/// `s` must be a valid handle; `out_json` and `out_stable` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tsc_certify(
    s: *const TscScenario,
    out_json: *mut *mut c_char,
    out_stable: *mut c_int,
) -> TscStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        check_out(out_stable, "out_stable")?;
        *out_json = ptr::null_mut();
        let sc = scenario_ref(s)?;
        let c = certify(&sc.name, &sc.system()?, &sc.window()?, &sc.config.thresholds);
        *out_stable = c_int::from(c.is_stable());
        emit_string(out_json, c.to_json())
    })
}

/// Simulated trajectory as CSV. `step <= 0` uses the scenario's configured step.
///
/// # Safety
/// `s` must be a valid handle and `out_csv` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsc_simulate_csv(s: *const TscScenario, step: f64, out_csv: *mut *mut c_char) -> TscStatus {
    guard(|| {
        check_out(out_csv, "out_csv")?;
        *out_csv = ptr::null_mut();
        let sc = scenario_ref(s)?;
        let h = if step > 0.0 { step } else { sc.config.h };
        if !h.is_finite() {
            return Err(Failure(TscStatus::InvalidInput, format!("step {step} is not finite")));
        }
        let (ts, sys) = (sc.window()?, sc.system()?);
        let traj = Simulator::new(&sys, &ts, sc.config.dense_samples)?.run(h)?;
        emit_string(out_csv, traj.to_csv())
    })
}

/// Eigenvalues of B in ascending order. `*out_len` always receives the
/// dimension; `BufferTooSmall` is returned when `cap` is less than it.
///
/// # Safety
/// `s` must be a valid handle, `out_len` a valid pointer, and `buf` valid for
/// `cap` writes (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn tsc_eigenvalues(
    s: *const TscScenario,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> TscStatus {
    guard(|| {
        check_out(out_len, "out_len")?;
        let sys = scenario_ref(s)?.system()?;
        let lambdas = &sys.eig.lambdas;
        *out_len = lambdas.len();
        if cap < lambdas.len() {
            return Err(Failure(
                TscStatus::BufferTooSmall,
                format!("need {} slots, got {cap}", lambdas.len()),
            ));
        }
        check_out(buf, "buf")?;
        ptr::copy_nonoverlapping(lambdas.as_ptr(), buf, lambdas.len());
        Ok(())
    })
}

/// Spectral norm of the generalized exponential `e_{-γB}(t, t0)`.
///
/// # Safety
/// `s` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsc_ts_exponential_norm(s: *const TscScenario, t0: f64, t: f64, out: *mut f64) -> TscStatus {
    guard(|| {
        check_out(out, "out")?;
        let sc = scenario_ref(s)?;
        let (ts, sys) = (sc.window()?, sc.system()?);
        *out = TsExponential::new(&ts, &sys.eig, &sys.gamma).spectral_norm(t0, t)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn tsc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tsc_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}
