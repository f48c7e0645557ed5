use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use clairaut_ffi::*;

fn last_error() -> String {
    let p = clairaut_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(name: &str) -> *mut ClairautScenarioHandle {
    let path = CString::new(name).unwrap();
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { clairaut_scenario_load(path.as_ptr(), &mut sc) }, ClairautStatus::Ok);
    sc
}

#[test]
fn run_bundled_scenario() {
    let sc = load("example-i");
    unsafe {
        assert_eq!(clairaut_scenario_dim(sc), 4);
        assert_eq!(clairaut_scenario_configure(sc, 5, 12, 0.0), ClairautStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(clairaut_scenario_run(sc, ClairautFormat::Machine, &mut report), ClairautStatus::Ok);
        let text = CStr::from_ptr(report).to_string_lossy().into_owned();
        assert!(text.contains("\"overall\": \"pass\""));
        assert!(text.contains("\"seed\": 5"));
        clairaut_string_free(report);
        clairaut_scenario_free(sc);
    }
}

#[test]
fn failing_checks_still_return_report() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let text = std::fs::read_to_string(format!("{dir}/../core/scenarios/example-ii.toml"))
        .unwrap()
        .replace("f = \"ln(sqrt(x1^2 + x2^2))\"", "f = \"x3\"");
    let (text, name) = (CString::new(text).unwrap(), CString::new("bad").unwrap());
    let mut sc = ptr::null_mut();
    unsafe {
        assert_eq!(clairaut_scenario_from_str(text.as_ptr(), name.as_ptr(), &mut sc), ClairautStatus::Ok);
        clairaut_scenario_configure(sc, -1, 10, 0.0);
        let mut report = ptr::null_mut();
        let st = clairaut_scenario_run(sc, ClairautFormat::Human, &mut report);
        assert_eq!(st, ClairautStatus::CheckFailed);
        assert_eq!(clairaut_status_has_output(st), 1);
        assert!(CStr::from_ptr(report).to_string_lossy().contains("overall: fail"));
        clairaut_string_free(report);
        clairaut_scenario_free(sc);
    }
}

#[test]
fn invalid_scenario_sets_error() {
    let (text, name) = (CString::new("[manifold]\ndim = 4\n").unwrap(), CString::new("x").unwrap());
    let mut sc = ptr::null_mut();
    let st = unsafe { clairaut_scenario_from_str(text.as_ptr(), name.as_ptr(), &mut sc) };
    assert_eq!(st, ClairautStatus::InvalidInput);
    assert!(sc.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_reported() {
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { clairaut_scenario_load(ptr::null(), &mut sc) }, ClairautStatus::NullPointer);
    assert!(last_error().contains("path"));
    let mut report = ptr::null_mut();
    let st = unsafe { clairaut_scenario_run(ptr::null(), ClairautFormat::Human, &mut report) };
    assert_eq!(st, ClairautStatus::NullPointer);
    assert_eq!(unsafe { clairaut_trajectory_len(ptr::null()) }, 0);
}

#[test]
fn geodesic_samples_and_domain_errors() {
    let sc = load("example-ii");
    unsafe {
        let (p0, v0) = ([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
        let mut t = ptr::null_mut();
        assert_eq!(clairaut_geodesic(sc, p0.as_ptr(), v0.as_ptr(), 4, 1.0, 1e-2, &mut t), ClairautStatus::Ok);
        assert_eq!(clairaut_trajectory_len(t), 101);
        let (mut s, mut point, mut inv) = (0.0, [0.0; 4], 0.0);
        let st = clairaut_trajectory_sample(t, 100, &mut s, point.as_mut_ptr(), ptr::null_mut(), ptr::null_mut(), &mut inv);
        assert_eq!(st, ClairautStatus::Ok);
        assert!((s - 1.0).abs() < 1e-12);
        assert!((point[1] - 1.0).abs() < 1e-10);
        assert!((inv - 1.0).abs() < 1e-9);
        let st = clairaut_trajectory_sample(t, 101, &mut s, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(st, ClairautStatus::InvalidInput);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("t.csv").to_str().unwrap()).unwrap();
        assert_eq!(clairaut_trajectory_write_csv(t, path.as_ptr()), ClairautStatus::Ok);
        clairaut_trajectory_free(t);

        let axis = [0.0, 0.0, 1.0, 0.0];
        let st = clairaut_geodesic(sc, axis.as_ptr(), v0.as_ptr(), 4, 1.0, 1e-2, &mut t);
        assert_eq!(st, ClairautStatus::InvalidInput);
        let st = clairaut_geodesic(sc, p0.as_ptr(), [2.0, 0.0, 0.0, 0.0].as_ptr(), 4, 2.0, 1e-2, &mut t);
        assert_eq!(st, ClairautStatus::RuntimeError);
        assert!(last_error().contains("left the domain"));
        clairaut_scenario_free(sc);
    }
}

#[test]
fn expressions_round_trip() {
    let text = CString::new("x1^2 * sin(x2)").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(clairaut_expr_parse(text.as_ptr(), 2, &mut e, ptr::null_mut()), ClairautStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(clairaut_expr_diff(e, 0, &mut d), ClairautStatus::Ok);
        let (p, mut val) = ([3.0, 0.5], 0.0);
        assert_eq!(clairaut_expr_eval(d, p.as_ptr(), 2, &mut val), ClairautStatus::Ok);
        assert!((val - 6.0 * 0.5f64.sin()).abs() < 1e-14);
        let s = clairaut_expr_to_string(e);
        assert!(!CStr::from_ptr(s).to_bytes().is_empty());
        clairaut_string_free(s);

        let bad = CString::new("ln(x1)").unwrap();
        let mut b = ptr::null_mut();
        clairaut_expr_parse(bad.as_ptr(), 1, &mut b, ptr::null_mut());
        assert_eq!(clairaut_expr_eval(b, [0.0].as_ptr(), 1, &mut val), ClairautStatus::RuntimeError);
        clairaut_expr_free(b);
        clairaut_expr_free(d);
        clairaut_expr_free(e);
    }
}

#[test]
fn presets_and_version() {
    let p = clairaut_presets();
    let text = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    assert!(text.contains("twisted-phi"));
    unsafe { clairaut_string_free(p) };
    let v = unsafe { CStr::from_ptr(clairaut_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles `tests/c/smoke.c` against the generated header and the shared
/// library. Skipped when no C compiler is on PATH.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/ffi-<hash> -> target/<profile>
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    if !lib_dir.join("libclairaut_ffi.so").exists() && !lib_dir.join("libclairaut_ffi.dylib").exists() {
        eprintln!("skipping: shared library not found in {}", lib_dir.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lclairaut_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .env("DYLD_LIBRARY_PATH", &lib_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
