use std::ffi::{c_char, c_int, CStr, CString};
use std::process::Command;
use std::ptr;

use tsconsensus_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tsc_last_error()) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut TscScenario {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tsc_scenario_builtin(name.as_ptr(), &mut s) }, TscStatus::Ok);
    assert!(!s.is_null());
    s
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    tsc_string_free(p);
    s
}

#[test]
fn builtin_round_trip() {
    let s = builtin("steady_gain");
    unsafe {
        let mut json = ptr::null_mut();
        let mut stable: c_int = -1;
        assert_eq!(tsc_certify(s, &mut json, &mut stable), TscStatus::Ok);
        assert_eq!(stable, 1);
        let cert: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(cert["route"], "constant_gain");

        let mut csv = ptr::null_mut();
        assert_eq!(tsc_simulate_csv(s, 0.0, &mut csv), TscStatus::Ok);
        assert!(take(csv).starts_with("t,class,eps_norm,envelope,eps_1"));
        tsc_scenario_free(s);
    }
}

#[test]
fn eigenvalues_and_norm() {
    let s = builtin("ex5");
    unsafe {
        let mut len = 0usize;
        assert_eq!(tsc_eigenvalues(s, ptr::null_mut(), 0, &mut len), TscStatus::BufferTooSmall);
        assert_eq!(len, 4);
        let mut buf = [0.0f64; 4];
        assert_eq!(tsc_eigenvalues(s, buf.as_mut_ptr(), 4, &mut len), TscStatus::Ok);
        let want = [2.0 - 2f64.sqrt(), 3.0, 2.0 + 2f64.sqrt(), 4.0];
        for (g, w) in buf.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        let mut norm = 0.0;
        assert_eq!(tsc_ts_exponential_norm(s, 1.5, 1.5, &mut norm), TscStatus::Ok);
        assert_eq!(norm, 1.0);
        assert_eq!(tsc_ts_exponential_norm(s, 1.5, 1.9, &mut norm), TscStatus::InvalidInput);
        assert!(!last_error().is_empty());
        tsc_scenario_free(s);
    }
}

#[test]
fn horizon_and_decomposition() {
    let s = builtin("ex9");
    unsafe {
        assert_eq!(tsc_scenario_set_horizon(s, 0.5), TscStatus::InvalidInput);
        assert!(last_error().contains("horizon"));
        assert_eq!(tsc_scenario_set_horizon(s, f64::NAN), TscStatus::InvalidInput);
        assert_eq!(tsc_scenario_set_horizon(s, 40.0), TscStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(tsc_decompose(s, &mut json), TscStatus::Ok);
        let d: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(d["boundaries"], serde_json::json!([1.0, 12.0, "inf"]));
        tsc_scenario_free(s);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        let bad = CString::new("{\"name\": 3}").unwrap();
        assert_eq!(tsc_scenario_from_json(bad.as_ptr(), &mut s), TscStatus::ParseError);
        assert!(s.is_null());
        assert!(last_error().contains("name"));
        assert_eq!(tsc_scenario_from_json(ptr::null(), &mut s), TscStatus::NullPointer);
        let unknown = CString::new("ex4").unwrap();
        assert_eq!(tsc_scenario_builtin(unknown.as_ptr(), &mut s), TscStatus::UnknownExample);
        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(
            tsc_scenario_builtin(invalid.as_ptr().cast(), &mut s),
            TscStatus::InvalidUtf8
        );
        let mut json = ptr::null_mut();
        let mut stable = 0;
        assert_eq!(tsc_certify(ptr::null(), &mut json, &mut stable), TscStatus::NullPointer);
        tsc_scenario_free(ptr::null_mut());
        tsc_string_free(ptr::null_mut());

        let good = CString::new(tsconsensus::scenario::Scenario::builtin("ex1").unwrap().to_json()).unwrap();
        assert_eq!(tsc_scenario_from_json(good.as_ptr(), &mut s), TscStatus::Ok);
        assert!(last_error().is_empty());
        tsc_scenario_free(s);
    }
}

#[test]
fn header_compiles_and_links_from_c() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libtsconsensus_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include "tsconsensus.h"
#include <stdio.h>
int main(void) {
    TscScenario *s = NULL;
    if (tsc_scenario_builtin("steady_gain", &s) != TSC_STATUS_OK) return 10;
    char *json = NULL;
    int stable = 0;
    if (tsc_certify(s, &json, &stable) != TSC_STATUS_OK) return 11;
    tsc_string_free(json);
    double lambdas[4];
    size_t n = 0;
    if (tsc_eigenvalues(s, lambdas, 4, &n) != TSC_STATUS_OK || n != 4) return 12;
    tsc_scenario_free(s);
    if (tsc_scenario_builtin("nope", &s) != TSC_STATUS_UNKNOWN_EXAMPLE) return 13;
    printf("%d %.6f %s\n", stable, lambdas[0], tsc_last_error());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(root.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("1 0.585786 unknown example `nope`"), "{text}");
}
