//! C ABI over the holoshannon library.
//!
//! Every fallible call returns an [`HcStatus`]; on failure the message is
//! kept per thread and read back with [`hc_last_error_message`]. Objects are
//! opaque handles released by their matching `*_free` function. Strings
//! returned to the caller are released with [`hc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holoshannon::acceptance;
use holoshannon::geometry::WedgeGeometry;
use holoshannon::hydro;
use holoshannon::lattice::{self, ClassicalMixture};
use holoshannon::maxent;
use holoshannon::mera::{self, MeraNetwork};
use holoshannon::report::RunReport;
use holoshannon::runner;
use holoshannon::scenario::{Scenario, ScenarioError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Scenario text or parameter rejected.
    Config = 3,
    /// Argument outside the domain of the computation.
    Domain = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

pub struct HcScenario(Scenario);

pub struct HcReport(RunReport);

pub struct HcMeraNetwork(MeraNetwork);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: HcStatus, message: impl Into<String>) -> HcStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> HcStatus) -> HcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(HcStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HcStatus> {
    if s.is_null() {
        return Err(fail(HcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(HcStatus::InvalidUtf8, "string is not UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(HcStatus::NullPointer, concat!("null output pointer `", stringify!($p), "`"));
        }
    };
}

fn config_status(e: ScenarioError) -> HcStatus {
    fail(HcStatus::Config, e.to_string())
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The built-in ground-state scenario.
#[no_mangle]
pub extern "C" fn hc_scenario_ground() -> *mut HcScenario {
    Box::into_raw(Box::new(HcScenario(Scenario::ground())))
}

/// Parses and validates a TOML scenario.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_scenario_from_toml(text: *const c_char, out: *mut *mut HcScenario) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Scenario::from_toml_str(text) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(HcScenario(s)));
                HcStatus::Ok
            }
            Err(e) => config_status(e),
        }
    })
}

/// Sets a scalar field by dotted path, e.g. `"geometry.l"`.
///
/// # Safety
/// `scenario` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hc_scenario_set_param(
    scenario: *mut HcScenario,
    path: *const c_char,
    value: f64,
) -> HcStatus {
    guard(|| {
        let Some(s) = scenario.as_mut() else {
            return fail(HcStatus::NullPointer, "null scenario");
        };
        let path = match read_str(path) {
            Ok(p) => p,
            Err(st) => return st,
        };
        match s.0.set_param(path, value) {
            Ok(()) => HcStatus::Ok,
            Err(e) => config_status(e),
        }
    })
}

/// # Safety
/// `scenario` must be null or come from this library, and is not used after.
#[no_mangle]
pub unsafe extern "C" fn hc_scenario_free(scenario: *mut HcScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs every pipeline. Failing checks are recorded in the report, not in
/// the status.
///
/// # Safety
/// `scenario` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_run_scenario(scenario: *const HcScenario, out: *mut *mut HcReport) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        let Some(s) = scenario.as_ref() else {
            return fail(HcStatus::NullPointer, "null scenario");
        };
        *out = Box::into_raw(Box::new(HcReport(runner::run_scenario(&s.0))));
        HcStatus::Ok
    })
}

/// # Safety
/// `report` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_report_all_passed(report: *const HcReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.all_passed())
}

/// # Safety
/// `report` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_report_failed_checks(report: *const HcReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.failures().count())
}

/// Looks up a named metric. `HC_STATUS_DOMAIN` when the report has none.
///
/// # Safety
/// `report` must come from this library; `name` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hc_report_metric(report: *const HcReport, name: *const c_char, out: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        let Some(r) = report.as_ref() else {
            return fail(HcStatus::NullPointer, "null report");
        };
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        match r.0.metric(name) {
            Some(v) => {
                *out = v;
                HcStatus::Ok
            }
            None => fail(HcStatus::Domain, format!("no metric `{name}`")),
        }
    })
}

/// The report as pretty-printed JSON; free with [`hc_string_free`].
///
/// # Safety
/// `report` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_report_json(report: *const HcReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(r.0.to_json()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must be null or come from this library, and is not used after.
#[no_mangle]
pub unsafe extern "C" fn hc_report_free(report: *mut HcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Acceptance suite as JSON; `all_passed` may be null.
///
/// # Safety
/// `all_passed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_acceptance_json(seed: u64, all_passed: *mut bool) -> *mut c_char {
    let result = catch_unwind(|| acceptance::run_acceptance(seed).0);
    match result {
        Ok(report) => {
            if let Some(flag) = all_passed.as_mut() {
                *flag = report.all_passed();
            }
            into_c_string(report.to_json())
        }
        Err(_) => {
            set_error("internal panic");
            ptr::null_mut()
        }
    }
}

/// Binary network over `l0` boundary sites; `m_h < 0` means no thermal
/// truncation.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_mera_build(l0: u64, m_h: i64, out: *mut *mut HcMeraNetwork) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        let m_h = (m_h >= 0).then_some(m_h as usize);
        match mera::build_network(l0, 2, m_h) {
            Ok(n) => {
                *out = Box::into_raw(Box::new(HcMeraNetwork(n)));
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::Domain, e.to_string()),
        }
    })
}

/// Bits per ensemble member `(1 + replicas) * sum_m l_m`.
/// `HC_STATUS_DOMAIN` if the value does not fit in 64 bits.
///
/// # Safety
/// `net` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_mera_area_bits(net: *const HcMeraNetwork, replicas: u64, out: *mut u64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        let Some(n) = net.as_ref() else {
            return fail(HcStatus::NullPointer, "null network");
        };
        let bits = mera::boundary_microstates(&n.0, replicas);
        match u64::try_from(bits) {
            Ok(v) => {
                *out = v;
                HcStatus::Ok
            }
            Err(_) => fail(HcStatus::Domain, "entropy exceeds 64 bits"),
        }
    })
}

/// Number of coarse-graining steps of one tower.
///
/// # Safety
/// `net` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn hc_mera_depth(net: *const HcMeraNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.depth())
}

/// # Safety
/// `net` must be null or come from this library, and is not used after.
#[no_mangle]
pub unsafe extern "C" fn hc_mera_free(net: *mut HcMeraNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

fn geometry(l: f64, eps: f64, r_ads: f64, g_newton: f64) -> Result<WedgeGeometry, HcStatus> {
    WedgeGeometry::new(l, eps, r_ads, g_newton).map_err(|e| fail(HcStatus::Domain, e.to_string()))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_geodesic_length(l: f64, eps: f64, r_ads: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        match geometry(l, eps, r_ads, 1.0).map(|g| g.geodesic_length()) {
            Ok(Ok(v)) => {
                *out = v;
                HcStatus::Ok
            }
            Ok(Err(e)) => fail(HcStatus::Domain, e.to_string()),
            Err(s) => s,
        }
    })
}

/// Wedge area in units of `R_AdS^2`; zero for `l <= 2 eps`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_wedge_area(l: f64, eps: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        match geometry(l, eps, 1.0, 1.0) {
            Ok(g) => {
                *out = g.wedge_area();
                HcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_holographic_complexity(
    l: f64,
    eps: f64,
    r_ads: f64,
    g_newton: f64,
    out: *mut f64,
) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        match geometry(l, eps, r_ads, g_newton) {
            Ok(g) => {
                *out = g.holographic_complexity();
                HcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Minimum time to an orthogonal state, `h / (4 eps_kin)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_margolus_levitin(eps_kin: f64, out: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        match hydro::margolus_levitin(eps_kin) {
            Ok(t) => {
                *out = t;
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::Domain, e.to_string()),
        }
    })
}

/// # Safety
/// `alpha` and `beta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_multipliers(g_newton: f64, r_ads: f64, alpha: *mut f64, beta: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(alpha);
        out_ptr!(beta);
        match maxent::determine_multipliers(g_newton, r_ads) {
            Ok(m) => {
                *alpha = m.alpha;
                *beta = m.beta;
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::Domain, e.to_string()),
        }
    })
}

/// Shannon entropy in bits of `n` non-negative weights (renormalized).
///
/// # Safety
/// `probabilities` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_shannon_entropy_bits(probabilities: *const f64, n: usize, out: *mut f64) -> HcStatus {
    guard(|| {
        out_ptr!(out);
        if probabilities.is_null() && n > 0 {
            return fail(HcStatus::NullPointer, "null probabilities");
        }
        let values = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(probabilities, n)
        };
        if values.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return fail(HcStatus::Domain, "weights must be finite and non-negative");
        }
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return fail(HcStatus::Domain, "weights sum to zero");
        }
        let mixture = ClassicalMixture {
            probabilities: values.to_vec(),
            captured_norm: total,
        };
        *out = lattice::shannon_entropy_bits(&mixture);
        HcStatus::Ok
    })
}
