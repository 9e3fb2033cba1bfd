//! C ABI for the qla2d simulation library.
//!
//! Handles are opaque pointers created and destroyed by this library.
//! Every function returns a status code; on failure a thread-local message
//! is retrievable with `qla2d_last_error`. No function panics across the
//! boundary.

use qla2d::config::{parse_config, RunConfig};
use qla2d::diagnostics::total_energy;
use qla2d::runner::{build_scenario, run_scenario, Scenario};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes returned by every qla2d C API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qla2dStatus {
    Ok = 0,
    /// a required pointer argument was null or otherwise unusable
    NullArgument = 1,
    /// configuration text failed to parse or validate
    InvalidConfig = 2,
    /// the operation itself failed
    RuntimeError = 3,
}

/// Opaque parsed configuration.
pub struct Qla2dConfig {
    inner: RunConfig,
}

/// Opaque simulation: medium, state and region bookkeeping.
pub struct Qla2dSim {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(msg).unwrap_or_default();
    });
}

/// Copy the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `cap` bytes). Returns the full message length in bytes,
/// excluding the NUL.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn qla2d_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qla2d_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse a configuration text. On success writes a new handle to `out`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qla2d_config_parse(
    text: *const c_char,
    out: *mut *mut Qla2dConfig,
) -> Qla2dStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("config text is not valid UTF-8");
        return Qla2dStatus::InvalidConfig;
    };
    match parse_config(text) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(Qla2dConfig { inner: cfg }));
            Qla2dStatus::Ok
        }
        Err(errors) => {
            set_error(errors.to_string());
            Qla2dStatus::InvalidConfig
        }
    }
}

/// Destroy a config handle. Null is a no-op.
///
/// # Safety
/// `cfg` must be a handle from `qla2d_config_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qla2d_config_free(cfg: *mut Qla2dConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Build a simulation (medium, initial pulse, schedule) from a config.
///
/// # Safety
/// `cfg` must be a live config handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_create(
    cfg: *const Qla2dConfig,
    out: *mut *mut Qla2dSim,
) -> Qla2dStatus {
    if cfg.is_null() || out.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    let cfg = &(*cfg).inner;
    match catch_unwind(AssertUnwindSafe(|| build_scenario(cfg))) {
        Ok(Ok(scenario)) => {
            *out = Box::into_raw(Box::new(Qla2dSim { inner: scenario }));
            Qla2dStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            Qla2dStatus::RuntimeError
        }
        Err(_) => {
            set_error("panic while building scenario");
            Qla2dStatus::RuntimeError
        }
    }
}

/// Destroy a simulation handle. Null is a no-op.
///
/// # Safety
/// `sim` must be a handle from `qla2d_sim_create`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_free(sim: *mut Qla2dSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advance the simulation by `n_steps` iterations.
///
/// # Safety
/// `sim` must be a live simulation handle.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_step(sim: *mut Qla2dSim, n_steps: u64) -> Qla2dStatus {
    if sim.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    let sim = &mut (*sim).inner;
    match catch_unwind(AssertUnwindSafe(|| {
        for _ in 0..n_steps {
            sim.state.step();
        }
    })) {
        Ok(()) => Qla2dStatus::Ok,
        Err(_) => {
            set_error("panic during stepping");
            Qla2dStatus::RuntimeError
        }
    }
}

/// Current iteration count.
///
/// # Safety
/// `sim` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_iteration(
    sim: *const Qla2dSim,
    out: *mut u64,
) -> Qla2dStatus {
    if sim.is_null() || out.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    *out = (*sim).inner.state.t;
    Qla2dStatus::Ok
}

/// Lattice dimensions.
///
/// # Safety
/// `sim` must be live; `nx`, `ny` valid.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_grid(
    sim: *const Qla2dSim,
    nx: *mut u32,
    ny: *mut u32,
) -> Qla2dStatus {
    if sim.is_null() || nx.is_null() || ny.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    let geom = (*sim).inner.geom;
    *nx = geom.nx() as u32;
    *ny = geom.ny() as u32;
    Qla2dStatus::Ok
}

/// Total electromagnetic energy of the current field.
///
/// # Safety
/// `sim` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_total_energy(
    sim: *const Qla2dSim,
    out: *mut f64,
) -> Qla2dStatus {
    if sim.is_null() || out.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    *out = total_energy(&(*sim).inner.state.field);
    Qla2dStatus::Ok
}

/// Copy one qubit amplitude component (0..5) into `buf`, row-major with x
/// fastest; `len` must be at least nx·ny.
///
/// # Safety
/// `sim` must be live; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qla2d_sim_copy_component(
    sim: *const Qla2dSim,
    component: u32,
    buf: *mut f64,
    len: usize,
) -> Qla2dStatus {
    if sim.is_null() || buf.is_null() {
        set_error("null argument");
        return Qla2dStatus::NullArgument;
    }
    if component > 5 {
        set_error("component must be in 0..=5");
        return Qla2dStatus::RuntimeError;
    }
    let field = &(*sim).inner.state.field;
    let data = field.component(component as usize);
    if len < data.len() {
        set_error(format!(
            "buffer too small: need {} doubles, got {len}",
            data.len()
        ));
        return Qla2dStatus::RuntimeError;
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    Qla2dStatus::Ok
}

/// Parse a config file and execute it like the `qla2d run` subcommand.
/// Returns the CLI exit code: 0 ok, 1 config error, 2 runtime error.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qla2d_run_scenario_file(path: *const c_char) -> i32 {
    if path.is_null() {
        set_error("null argument");
        return 1;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return 1;
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("{path}: {e}"));
            return 1;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(errors) => {
            set_error(errors.to_string());
            return 1;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| run_scenario(&cfg))) {
        Ok(Ok(_)) => 0,
        Ok(Err(e)) => {
            set_error(e.to_string());
            2
        }
        Err(_) => {
            set_error("panic during run");
            2
        }
    }
}
