use std::ffi::{CStr, CString};
use std::ptr;

use holoshannon_ffi::*;

fn last_error() -> String {
    let p = hc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ground_scenario_round_trip() {
    unsafe {
        let scn = hc_scenario_ground();
        let mut report = ptr::null_mut();
        assert_eq!(hc_run_scenario(scn, &mut report), HcStatus::Ok);
        assert!(hc_report_all_passed(report));
        assert_eq!(hc_report_failed_checks(report), 0);

        let name = CString::new("h_total_bits").unwrap();
        let mut h = 0.0;
        assert_eq!(hc_report_metric(report, name.as_ptr(), &mut h), HcStatus::Ok);
        assert_eq!(h, 63.0);

        let json = hc_report_json(report);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        hc_string_free(json);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["metrics"]["h_total_bits"], 63.0);

        hc_report_free(report);
        hc_scenario_free(scn);
    }
}

#[test]
fn set_param_changes_the_run() {
    unsafe {
        let scn = hc_scenario_ground();
        let path = CString::new("geometry.l").unwrap();
        assert_eq!(hc_scenario_set_param(scn, path.as_ptr(), 128.0), HcStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(hc_run_scenario(scn, &mut report), HcStatus::Ok);
        let name = CString::new("h_total_bits").unwrap();
        let mut h = 0.0;
        assert_eq!(hc_report_metric(report, name.as_ptr(), &mut h), HcStatus::Ok);
        assert_eq!(h, 127.0);

        let missing = CString::new("no_such_metric").unwrap();
        assert_eq!(hc_report_metric(report, missing.as_ptr(), &mut h), HcStatus::Domain);
        assert!(last_error().contains("no_such_metric"));

        let bad = CString::new("geometry.width").unwrap();
        assert_eq!(hc_scenario_set_param(scn, bad.as_ptr(), 1.0), HcStatus::Config);
        hc_report_free(report);
        hc_scenario_free(scn);
    }
}

#[test]
fn malformed_toml_is_a_config_error() {
    unsafe {
        let text = CString::new("seed = 1\n[geometry]\nl = 64.0\n").unwrap();
        let mut scn = ptr::null_mut();
        assert_eq!(hc_scenario_from_toml(text.as_ptr(), &mut scn), HcStatus::Config);
        assert!(scn.is_null());
        assert!(!last_error().is_empty());

        let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/momentum.toml")).unwrap();
        let good = CString::new(good).unwrap();
        assert_eq!(hc_scenario_from_toml(good.as_ptr(), &mut scn), HcStatus::Ok);
        assert!(hc_last_error_message().is_null());
        hc_scenario_free(scn);
    }
}

#[test]
fn invalid_utf8_is_reported() {
    unsafe {
        let bytes = CString::new(vec![0xff, 0xfe]).unwrap();
        let mut scn = ptr::null_mut();
        assert_eq!(hc_scenario_from_toml(bytes.as_ptr(), &mut scn), HcStatus::InvalidUtf8);
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut out = 0.0;
        assert_eq!(hc_geodesic_length(64.0, 1.0, 1.0, ptr::null_mut()), HcStatus::NullPointer);
        assert_eq!(hc_run_scenario(ptr::null(), &mut ptr::null_mut()), HcStatus::NullPointer);
        assert_eq!(hc_scenario_from_toml(ptr::null(), &mut ptr::null_mut()), HcStatus::NullPointer);
        assert_eq!(hc_report_metric(ptr::null(), ptr::null(), &mut out), HcStatus::NullPointer);
        assert_eq!(hc_shannon_entropy_bits(ptr::null(), 3, &mut out), HcStatus::NullPointer);
        assert!(hc_report_json(ptr::null()).is_null());
        assert!(!hc_report_all_passed(ptr::null()));
        hc_scenario_free(ptr::null_mut());
        hc_report_free(ptr::null_mut());
        hc_mera_free(ptr::null_mut());
        hc_string_free(ptr::null_mut());
    }
}

#[test]
fn mera_counting() {
    unsafe {
        let mut net = ptr::null_mut();
        assert_eq!(hc_mera_build(64, -1, &mut net), HcStatus::Ok);
        assert_eq!(hc_mera_depth(net), 6);
        let mut bits = 0u64;
        assert_eq!(hc_mera_area_bits(net, 0, &mut bits), HcStatus::Ok);
        assert_eq!(bits, 63);
        assert_eq!(hc_mera_area_bits(net, 2, &mut bits), HcStatus::Ok);
        assert_eq!(bits, 189);
        hc_mera_free(net);

        assert_eq!(hc_mera_build(0, -1, &mut net), HcStatus::Domain);
    }
}

#[test]
fn scalar_functions() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(hc_geodesic_length(64.0, 1.0, 1.0, &mut v), HcStatus::Ok);
        assert!((v - 2.0 * 32f64.acosh()).abs() < 1e-12);
        assert_eq!(hc_wedge_area(64.0, 1.0, &mut v), HcStatus::Ok);
        assert!((v - 60.8897).abs() < 1e-3);
        assert_eq!(hc_margolus_levitin(1.0, &mut v), HcStatus::Ok);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(hc_margolus_levitin(-1.0, &mut v), HcStatus::Domain);

        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(hc_multipliers(1.0 / (8.0 * std::f64::consts::PI), 1.0, &mut a, &mut b), HcStatus::Ok);
        assert!(b > 0.0);

        let p = [0.25, 0.25, 0.5];
        assert_eq!(hc_shannon_entropy_bits(p.as_ptr(), 3, &mut v), HcStatus::Ok);
        assert!((v - 1.5).abs() < 1e-12);
        let bad = [0.5, -0.1];
        assert_eq!(hc_shannon_entropy_bits(bad.as_ptr(), 2, &mut v), HcStatus::Domain);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/holoshannon.h")).unwrap();
    for symbol in [
        "typedef struct HcScenario HcScenario;",
        "HC_STATUS_OK = 0",
        "HC_STATUS_PANIC = 5",
        "enum HcStatus hc_run_scenario(",
        "void hc_string_free(char *s);",
        "const char *hc_last_error_message(void);",
    ] {
        assert!(header.contains(symbol), "missing `{symbol}`");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/examples/smoke.c"))
        .status();
    match status {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}
