//! Exercises the C ABI surface the way a foreign caller would: handles,
//! status codes, error messages, buffer copies.

use qla2d_ffi::*;
use std::ffi::CString;
use std::ptr;

const CONFIG: &str = "\
grid.nx = 64
grid.ny = 64
scheme.epsilon = 0.25
medium.n1 = 1
medium.n2 = 2
interface.width = 1.0
pulse.zeta_w = 3
pulse.chi_w = 6
pulse.gamma_w = 6
pulse.theta_deg = 0
pulse.center_x = 14
pulse.center_y = 32
run.steps = 10
run.cadence = 5
output.dir = unused
";

fn last_error() -> String {
    let mut buf = vec![0i8; 512];
    let n = unsafe { qla2d_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(511)].iter().map(|&b| b as u8).collect();
    String::from_utf8_lossy(&bytes).into_owned()
}

#[test]
fn version_is_non_empty() {
    let v = qla2d_version();
    assert!(!v.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(v) }.to_str().unwrap();
    assert!(!s.is_empty());
}

#[test]
fn full_sim_lifecycle_conserves_energy() {
    let text = CString::new(CONFIG).unwrap();
    let mut cfg: *mut Qla2dConfig = ptr::null_mut();
    assert_eq!(
        unsafe { qla2d_config_parse(text.as_ptr(), &mut cfg) },
        Qla2dStatus::Ok
    );
    let mut sim: *mut Qla2dSim = ptr::null_mut();
    assert_eq!(unsafe { qla2d_sim_create(cfg, &mut sim) }, Qla2dStatus::Ok);

    let (mut nx, mut ny) = (0u32, 0u32);
    assert_eq!(
        unsafe { qla2d_sim_grid(sim, &mut nx, &mut ny) },
        Qla2dStatus::Ok
    );
    assert_eq!((nx, ny), (64, 64));

    let mut e0 = 0.0f64;
    assert_eq!(
        unsafe { qla2d_sim_total_energy(sim, &mut e0) },
        Qla2dStatus::Ok
    );
    assert!(e0 > 0.0);

    assert_eq!(unsafe { qla2d_sim_step(sim, 25) }, Qla2dStatus::Ok);
    let mut t = 0u64;
    assert_eq!(unsafe { qla2d_sim_iteration(sim, &mut t) }, Qla2dStatus::Ok);
    assert_eq!(t, 25);

    let mut e1 = 0.0f64;
    unsafe { qla2d_sim_total_energy(sim, &mut e1) };
    assert!(
        (e1 / e0 - 1.0).abs() < 1e-10,
        "energy drifted across the ABI: {e0} -> {e1}"
    );

    let mut hz = vec![0.0f64; (nx * ny) as usize];
    assert_eq!(
        unsafe { qla2d_sim_copy_component(sim, 5, hz.as_mut_ptr(), hz.len()) },
        Qla2dStatus::Ok
    );
    assert!(hz.iter().any(|&v| v != 0.0));

    unsafe {
        qla2d_sim_free(sim);
        qla2d_config_free(cfg);
    }
}

#[test]
fn bad_config_reports_keyed_errors() {
    let text = CString::new("grid.nx = banana\n").unwrap();
    let mut cfg: *mut Qla2dConfig = ptr::null_mut();
    assert_eq!(
        unsafe { qla2d_config_parse(text.as_ptr(), &mut cfg) },
        Qla2dStatus::InvalidConfig
    );
    assert!(cfg.is_null());
    let msg = last_error();
    assert!(msg.contains("grid.nx"), "message was: {msg}");
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(
        unsafe { qla2d_config_parse(ptr::null(), ptr::null_mut()) },
        Qla2dStatus::NullArgument
    );
    assert_eq!(unsafe { qla2d_sim_step(ptr::null_mut(), 1) }, Qla2dStatus::NullArgument);
    let mut e = 0.0f64;
    assert_eq!(
        unsafe { qla2d_sim_total_energy(ptr::null(), &mut e) },
        Qla2dStatus::NullArgument
    );
    // frees tolerate null
    unsafe {
        qla2d_sim_free(ptr::null_mut());
        qla2d_config_free(ptr::null_mut());
    }
}

#[test]
fn component_bounds_checked() {
    let text = CString::new(CONFIG).unwrap();
    let mut cfg: *mut Qla2dConfig = ptr::null_mut();
    unsafe { qla2d_config_parse(text.as_ptr(), &mut cfg) };
    let mut sim: *mut Qla2dSim = ptr::null_mut();
    unsafe { qla2d_sim_create(cfg, &mut sim) };

    let mut buf = vec![0.0f64; 64 * 64];
    assert_eq!(
        unsafe { qla2d_sim_copy_component(sim, 6, buf.as_mut_ptr(), buf.len()) },
        Qla2dStatus::RuntimeError
    );
    let mut small = vec![0.0f64; 16];
    assert_eq!(
        unsafe { qla2d_sim_copy_component(sim, 0, small.as_mut_ptr(), small.len()) },
        Qla2dStatus::RuntimeError
    );
    assert!(last_error().contains("buffer too small"));

    unsafe {
        qla2d_sim_free(sim);
        qla2d_config_free(cfg);
    }
}

#[test]
fn run_scenario_file_exit_codes() {
    // missing file -> config error (1)
    let bogus = CString::new("/nonexistent/qla2d.cfg").unwrap();
    assert_eq!(unsafe { qla2d_run_scenario_file(bogus.as_ptr()) }, 1);

    // valid file -> 0, artifacts written
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg_path = dir.path().join("run.cfg");
    let cfg_text = CONFIG.replace("output.dir = unused", &format!("output.dir = {}", out.display()));
    std::fs::write(&cfg_path, cfg_text).unwrap();
    let c_path = CString::new(cfg_path.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { qla2d_run_scenario_file(c_path.as_ptr()) }, 0);
    assert!(out.join("ledger.csv").exists());
    assert!(out.join("manifest.txt").exists());
}
