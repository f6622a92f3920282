//! C ABI for the analyzer. Callers hand over mapping source text plus a
//! plain configuration struct and receive an opaque report handle; the
//! report's JSON document and human summary are retrieved as owned C
//! strings. All functions are panic-safe and report failures through
//! integer status codes mirroring the CLI exit codes (0 success, 2 input
//! error, 3 guard violation) plus -1 for invalid arguments such as null
//! pointers or non-UTF-8 text.

use atinfinity::report::{exit_code_for, run_pipeline_on_text, AnalysisReport, Config};
use libc::{c_char, c_double, c_int};
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

pub const ATINF_OK: c_int = 0;
pub const ATINF_ERR_INPUT: c_int = 2;
pub const ATINF_ERR_GUARD: c_int = 3;
pub const ATINF_ERR_ARGUMENT: c_int = -1;
pub const ATINF_ERR_PANIC: c_int = -2;

/// Analysis options. Obtain defaults from `atinf_config_default` and
/// override fields as needed.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct AtinfConfig {
    /// Run the non-degeneracy-at-infinity check (0/1).
    pub check_nd: c_int,
    /// Compute bound sets and the invertibility verdict (0/1).
    pub bound: c_int,
    /// Compare the two non-degeneracy forms; real setting only (0/1).
    pub compare_definitions: c_int,
    /// Run the numeric asymptotic-value search (0/1).
    pub numeric: c_int,
    /// Translate away nonzero constant terms instead of rejecting (0/1).
    pub translate: c_int,
    /// Seed for all randomized stages.
    pub seed: u64,
    /// Residual tolerance override; pass 0 or a negative value for the default.
    pub tol: c_double,
    /// Initial sphere radius for the numeric search.
    pub radius0: c_double,
    /// Multiplicative radius factor (> 1).
    pub radius_factor: c_double,
    /// Number of radii in the schedule.
    pub radius_count: usize,
    /// Restarts per radius.
    pub restarts: usize,
}

/// Opaque analysis report handle.
pub struct AtinfReport {
    inner: AnalysisReport,
}

fn config_from_c(c: &AtinfConfig) -> Config {
    let defaults = Config::default();
    Config {
        check_nd: c.check_nd != 0,
        bound: c.bound != 0,
        compare_definitions: c.compare_definitions != 0,
        numeric: c.numeric != 0,
        translate: c.translate != 0,
        seed: c.seed,
        tol: (c.tol > 0.0).then_some(c.tol),
        radii: if c.radius0 > 0.0 && c.radius_factor > 1.0 && c.radius_count > 0 {
            (c.radius0, c.radius_factor, c.radius_count)
        } else {
            defaults.radii
        },
        restarts: if c.restarts > 0 { c.restarts } else { defaults.restarts },
        ..defaults
    }
}

/// Returns the default configuration.
#[no_mangle]
pub extern "C" fn atinf_config_default() -> AtinfConfig {
    let d = Config::default();
    AtinfConfig {
        check_nd: 0,
        bound: 0,
        compare_definitions: 0,
        numeric: 0,
        translate: 0,
        seed: 0,
        tol: 0.0,
        radius0: d.radii.0,
        radius_factor: d.radii.1,
        radius_count: d.radii.2,
        restarts: d.restarts,
    }
}

fn string_to_c(s: String) -> *mut c_char {
    // Interior NULs cannot appear in our JSON/summary output, but avoid
    // panicking on principle.
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

/// Analyzes mapping source text.
///
/// On success writes a report handle to `out_report` and returns 0. On
/// failure returns a nonzero status and, when `out_error` is non-null,
/// writes an owned error-message string there (free it with
/// `atinf_string_free`). `out_report` must be non-null; `out_error` may
/// be null.
///
/// # Safety
/// `text` must be a valid NUL-terminated string, and the out-pointers
/// must be valid for writes when non-null.
#[no_mangle]
pub unsafe extern "C" fn atinf_analyze(
    text: *const c_char,
    config: *const AtinfConfig,
    out_report: *mut *mut AtinfReport,
    out_error: *mut *mut c_char,
) -> c_int {
    if out_report.is_null() {
        return ATINF_ERR_ARGUMENT;
    }
    *out_report = ptr::null_mut();
    if !out_error.is_null() {
        *out_error = ptr::null_mut();
    }
    if text.is_null() {
        return ATINF_ERR_ARGUMENT;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return ATINF_ERR_ARGUMENT;
    };
    let cfg = if config.is_null() {
        config_from_c(&atinf_config_default())
    } else {
        config_from_c(&*config)
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run_pipeline_on_text(text, &cfg)));
    match outcome {
        Ok(Ok(report)) => {
            *out_report = Box::into_raw(Box::new(AtinfReport { inner: report }));
            ATINF_OK
        }
        Ok(Err(err)) => {
            if !out_error.is_null() {
                *out_error = string_to_c(err.to_string());
            }
            exit_code_for(&err)
        }
        Err(_) => ATINF_ERR_PANIC,
    }
}

/// Returns the report's JSON document as an owned string (free with
/// `atinf_string_free`), or null if `report` is null.
///
/// # Safety
/// `report` must be a handle returned by `atinf_analyze` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn atinf_report_json(report: *const AtinfReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    let json = serde_json::to_string_pretty(&(*report).inner.json).expect("serializable");
    string_to_c(json)
}

/// Returns the report's human-readable summary as an owned string (free
/// with `atinf_string_free`), or null if `report` is null.
///
/// # Safety
/// `report` must be a handle returned by `atinf_analyze` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn atinf_report_summary(report: *const AtinfReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    string_to_c((*report).inner.human.clone())
}

/// Frees a report handle. Null is ignored.
///
/// # Safety
/// `report` must be a handle returned by `atinf_analyze`, freed at most
/// once.
#[no_mangle]
pub unsafe extern "C" fn atinf_report_free(report: *mut AtinfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn atinf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    const QUADRIC: &str = "setting: real\nvars: x y\nmap:\nf = x^2 - y^2\n";

    unsafe fn analyze(text: &str, cfg: &AtinfConfig) -> (c_int, *mut AtinfReport, *mut c_char) {
        let ctext = CString::new(text).unwrap();
        let mut report: *mut AtinfReport = ptr::null_mut();
        let mut error: *mut c_char = ptr::null_mut();
        let code = atinf_analyze(ctext.as_ptr(), cfg, &mut report, &mut error);
        (code, report, error)
    }

    #[test]
    fn analyze_roundtrip_and_free() {
        unsafe {
            let mut cfg = atinf_config_default();
            cfg.check_nd = 1;
            cfg.bound = 1;
            let (code, report, error) = analyze(QUADRIC, &cfg);
            assert_eq!(code, ATINF_OK);
            assert!(error.is_null());
            let json = atinf_report_json(report);
            assert!(!json.is_null());
            let s = CStr::from_ptr(json).to_str().unwrap();
            assert!(s.contains("\"schema_version\""));
            assert!(s.contains("\"bound\""));
            let summary = atinf_report_summary(report);
            assert!(!summary.is_null());
            assert!(CStr::from_ptr(summary).to_str().unwrap().contains("convenient"));
            atinf_string_free(json);
            atinf_string_free(summary);
            atinf_report_free(report);
        }
    }

    #[test]
    fn input_error_sets_message_and_code() {
        unsafe {
            let cfg = atinf_config_default();
            let (code, report, error) =
                analyze("setting: real\nvars: x\nmap:\nf = x + 1\n", &cfg);
            assert_eq!(code, ATINF_ERR_INPUT);
            assert!(report.is_null());
            assert!(!error.is_null());
            let msg = CStr::from_ptr(error).to_str().unwrap();
            assert!(msg.contains("constant term"));
            atinf_string_free(error);
        }
    }

    #[test]
    fn guard_violation_maps_to_code_three() {
        unsafe {
            let cfg = atinf_config_default();
            let vars: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
            let body: Vec<String> = vars.iter().map(|v| format!("{v}^2")).collect();
            let text = format!(
                "setting: real\nvars: {}\nmap:\nf = {}\n",
                vars.join(" "),
                body.join(" + ")
            );
            let (code, report, error) = analyze(&text, &cfg);
            assert_eq!(code, ATINF_ERR_GUARD);
            assert!(report.is_null());
            atinf_string_free(error);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let ctext = CString::new(QUADRIC).unwrap();
            let mut error: *mut c_char = ptr::null_mut();
            assert_eq!(
                atinf_analyze(ctext.as_ptr(), ptr::null(), ptr::null_mut(), &mut error),
                ATINF_ERR_ARGUMENT
            );
            let mut report: *mut AtinfReport = ptr::null_mut();
            assert_eq!(
                atinf_analyze(ptr::null(), ptr::null(), &mut report, ptr::null_mut()),
                ATINF_ERR_ARGUMENT
            );
            assert!(atinf_report_json(ptr::null()).is_null());
            atinf_report_free(ptr::null_mut());
            atinf_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn json_is_reproducible_across_calls() {
        unsafe {
            let mut cfg = atinf_config_default();
            cfg.check_nd = 1;
            let mut texts = Vec::new();
            for _ in 0..2 {
                let (code, report, _) = analyze(QUADRIC, &cfg);
                assert_eq!(code, ATINF_OK);
                let json = atinf_report_json(report);
                texts.push(CStr::from_ptr(json).to_str().unwrap().to_owned());
                atinf_string_free(json);
                atinf_report_free(report);
            }
            assert_eq!(texts[0], texts[1]);
        }
    }
}
