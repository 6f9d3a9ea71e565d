//! C ABI for the verification engine.
//!
//! Conventions:
//!
//! * Run handles are opaque (`QpiReportSet`); free them with
//!   [`qpi_report_free`]. Strings returned by the library are heap
//!   allocations owned by the caller; free them with [`qpi_string_free`].
//! * Every entry point catches panics and converts them into
//!   `QPI_STATUS_PANIC` (or a null pointer for string-returning calls).
//! * On failure, a thread-local message describing the error is available
//!   via [`qpi_last_error`] until the next failing call on that thread.
//! * Verification calls distinguish "the run completed" (their return
//!   status) from "every check passed" (queried on the handle), mirroring
//!   the process exit codes 0 / 2 / 3 via [`qpi_report_exit_code`].

use qpi::certificates::{find_certificate, verify_certificate, Certificate, CertificateError};
use qpi::multisum::{eval_multisum, SumSpec};
use qpi::partitions::enumerate_gamma;
use qpi::pipeline::{
    check_conjecture, exit_code, sanity_classical, verify_all, verify_theorem1, verify_theorem2,
    Report, RunConfig,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code returned by fallible entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpiStatus {
    /// The call completed.
    Ok = 0,
    /// A pointer was null, UTF-8 was invalid, or a value was out of range.
    InvalidArgument = 1,
    /// A certificate failed verification.
    CheckFailed = 2,
    /// The certificate search exhausted its window growth.
    WindowExhausted = 3,
    /// The library caught an internal panic.
    Panic = 4,
}

/// Opaque handle holding the reports of one verification run.
pub struct QpiReportSet {
    reports: Vec<Report>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NULs removed"));
    });
}

/// Message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qpi_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |msg| msg.as_ptr())
    })
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn qpi_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Internal helpers
// ---------------------------------------------------------------------------

fn guard_status<F>(body: F) -> QpiStatus
where
    F: FnOnce() -> QpiStatus,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            QpiStatus::Panic
        }
    }
}

fn guard_string<F>(body: F) -> *mut c_char
where
    F: FnOnce() -> Result<String, String>,
{
    let outcome = catch_unwind(AssertUnwindSafe(body));
    match outcome {
        Ok(Ok(text)) => {
            let sanitized = text.replace('\0', " ");
            CString::new(sanitized).expect("NULs removed").into_raw()
        }
        Ok(Err(message)) => {
            set_error(&message);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// Read a required UTF-8 argument.
///
/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, String> {
    if ptr.is_null() {
        return Err(format!("{what} must not be null"));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| format!("{what} must be valid UTF-8"))
}

fn emit_reports(
    reports: Vec<Report>,
    out: *mut *mut QpiReportSet,
) -> QpiStatus {
    if out.is_null() {
        set_error("output handle must not be null");
        return QpiStatus::InvalidArgument;
    }
    let handle = Box::new(QpiReportSet { reports });
    unsafe { *out = Box::into_raw(handle) };
    QpiStatus::Ok
}

// ---------------------------------------------------------------------------
// Verification runs
// ---------------------------------------------------------------------------

/// Run every verification chain at the given series order.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn qpi_verify_all(order: u32, out: *mut *mut QpiReportSet) -> QpiStatus {
    guard_status(|| emit_reports(verify_all(RunConfig { order }), out))
}

/// Run one identity's chain; `which` must be 1 or 2.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn qpi_verify_theorem(
    which: u8,
    order: u32,
    out: *mut *mut QpiReportSet,
) -> QpiStatus {
    guard_status(|| {
        let report = match which {
            1 => verify_theorem1(RunConfig { order }),
            2 => verify_theorem2(RunConfig { order }),
            _ => {
                set_error("which must be 1 or 2");
                return QpiStatus::InvalidArgument;
            }
        };
        emit_reports(vec![report], out)
    })
}

/// Compare the weighted count table against its conjectured sum side
/// (finite-order evidence only).
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn qpi_verify_conjecture(
    order: u32,
    out: *mut *mut QpiReportSet,
) -> QpiStatus {
    guard_status(|| emit_reports(vec![check_conjecture(RunConfig { order })], out))
}

/// Check the classical sanity identities.
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn qpi_verify_sanity(order: u32, out: *mut *mut QpiReportSet) -> QpiStatus {
    guard_status(|| emit_reports(vec![sanity_classical(RunConfig { order })], out))
}

/// True iff every check in the run passed.
///
/// # Safety
/// `handle` must come from a `qpi_verify_*` call and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qpi_report_passed(handle: *const QpiReportSet) -> bool {
    if handle.is_null() {
        return false;
    }
    let set = unsafe { &*handle };
    set.reports.iter().all(Report::passed)
}

/// Process-style exit code for the run: 0 all passed, 2 any failure,
/// 3 a certificate search exhausted its window.
///
/// # Safety
/// `handle` must come from a `qpi_verify_*` call and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qpi_report_exit_code(handle: *const QpiReportSet) -> i32 {
    if handle.is_null() {
        return 2;
    }
    let set = unsafe { &*handle };
    exit_code(&set.reports)
}

/// The run's reports as a JSON array; free with `qpi_string_free`.
/// Returns null on internal failure.
///
/// # Safety
/// `handle` must come from a `qpi_verify_*` call and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qpi_report_json(handle: *const QpiReportSet) -> *mut c_char {
    guard_string(|| {
        if handle.is_null() {
            return Err("handle must not be null".into());
        }
        let set = unsafe { &*handle };
        serde_json::to_string_pretty(&set.reports).map_err(|e| e.to_string())
    })
}

/// The run's reports rendered as human-readable text; free with
/// `qpi_string_free`. Returns null on internal failure.
///
/// # Safety
/// `handle` must come from a `qpi_verify_*` call and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn qpi_report_text(handle: *const QpiReportSet) -> *mut c_char {
    guard_string(|| {
        if handle.is_null() {
            return Err("handle must not be null".into());
        }
        let set = unsafe { &*handle };
        Ok(set.reports.iter().map(Report::to_string).collect())
    })
}

/// Release a run handle. Null is allowed and ignored.
///
/// # Safety
/// `handle` must come from a `qpi_verify_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qpi_report_free(handle: *mut QpiReportSet) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Release a string returned by this library. Null is allowed and ignored.
///
/// # Safety
/// `text` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qpi_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

/// The admissible colored partitions of `n`, one per line (`5R+1G` style),
/// honoring the comma-separated forbidden parts in `forbid` (empty string
/// forbids nothing). Free with `qpi_string_free`; null on error.
///
/// # Safety
/// `forbid` must be null (treated as empty) or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qpi_enumerate(n: u32, forbid: *const c_char) -> *mut c_char {
    guard_string(|| {
        let forbid = if forbid.is_null() {
            ""
        } else {
            unsafe { read_str(forbid, "forbid") }?
        };
        let forbidden = forbid.parse().map_err(|e| format!("{e}"))?;
        let partitions = enumerate_gamma(n, &forbidden).map_err(|e| format!("{e}"))?;
        let mut lines = String::new();
        for p in &partitions {
            lines.push_str(&format!("{p}\n"));
        }
        Ok(lines)
    })
}

/// One triple multisum evaluated through `order`, as the series' JSON
/// encoding. `family` is "S" or "T"; `x_at_one` nonzero specializes x = 1.
/// Free with `qpi_string_free`; null on error.
///
/// # Safety
/// `family` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qpi_multisum(
    family: *const c_char,
    a: u32,
    b: u32,
    c: u32,
    order: u32,
    x_at_one: bool,
) -> *mut c_char {
    guard_string(|| {
        let family = unsafe { read_str(family, "family") }?.parse()?;
        let mut series = eval_multisum(&SumSpec::new(family, a, b, c), order);
        if x_at_one {
            series = series.at_x_one();
        }
        Ok(series.to_json())
    })
}

/// Search for a certificate for a named target equation ("proofA" …
/// "proofE") and write its JSON to `out_json` (free with
/// `qpi_string_free`). The found certificate is re-verified before being
/// returned.
///
/// # Safety
/// `target` must be a NUL-terminated string; `out_json` must be a valid
/// pointer to receive the string.
#[no_mangle]
pub unsafe extern "C" fn qpi_certificate_find(
    target: *const c_char,
    out_json: *mut *mut c_char,
) -> QpiStatus {
    guard_status(|| {
        if out_json.is_null() {
            set_error("out_json must not be null");
            return QpiStatus::InvalidArgument;
        }
        let id = match unsafe { read_str(target, "target") }
            .and_then(|s| s.parse().map_err(|e: CertificateError| e.to_string()))
        {
            Ok(id) => id,
            Err(message) => {
                set_error(&message);
                return QpiStatus::InvalidArgument;
            }
        };
        let cert: Certificate = match find_certificate(id) {
            Ok(cert) => cert,
            Err(CertificateError::WindowExhausted { rounds }) => {
                set_error(&format!("window exhausted after {rounds} growth rounds"));
                return QpiStatus::WindowExhausted;
            }
            Err(e) => {
                set_error(&e.to_string());
                return QpiStatus::CheckFailed;
            }
        };
        if let Err(e) = verify_certificate(&cert) {
            set_error(&format!("found but failed to verify: {e}"));
            return QpiStatus::CheckFailed;
        }
        let json = CString::new(cert.to_json().replace('\0', " ")).expect("NULs removed");
        unsafe { *out_json = json.into_raw() };
        QpiStatus::Ok
    })
}

/// Verify a certificate given as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qpi_certificate_check(json: *const c_char) -> QpiStatus {
    guard_status(|| {
        let text = match unsafe { read_str(json, "json") } {
            Ok(text) => text,
            Err(message) => {
                set_error(&message);
                return QpiStatus::InvalidArgument;
            }
        };
        let cert = match Certificate::from_json(text) {
            Ok(cert) => cert,
            Err(e) => {
                set_error(&e.to_string());
                return QpiStatus::InvalidArgument;
            }
        };
        match verify_certificate(&cert) {
            Ok(()) => QpiStatus::Ok,
            Err(e) => {
                set_error(&e.to_string());
                QpiStatus::CheckFailed
            }
        }
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { qpi_string_free(ptr) };
        text
    }

    #[test]
    fn verify_sanity_roundtrip() {
        let mut handle: *mut QpiReportSet = ptr::null_mut();
        let status = unsafe { qpi_verify_sanity(40, &mut handle) };
        assert_eq!(status, QpiStatus::Ok);
        assert!(unsafe { qpi_report_passed(handle) });
        assert_eq!(unsafe { qpi_report_exit_code(handle) }, 0);
        let json = take_string(unsafe { qpi_report_json(handle) });
        assert!(json.contains("\"checks\""));
        let text = take_string(unsafe { qpi_report_text(handle) });
        assert!(text.contains("overall: PASS"));
        unsafe { qpi_report_free(handle) };
    }

    #[test]
    fn verify_theorem_rejects_bad_selector() {
        let mut handle: *mut QpiReportSet = ptr::null_mut();
        let status = unsafe { qpi_verify_theorem(3, 10, &mut handle) };
        assert_eq!(status, QpiStatus::InvalidArgument);
        assert!(handle.is_null());
        let message = unsafe { CStr::from_ptr(qpi_last_error()) };
        assert!(message.to_str().unwrap().contains("1 or 2"));
    }

    #[test]
    fn enumerate_matches_library_output() {
        let forbid = CString::new("1R").unwrap();
        let listing = take_string(unsafe { qpi_enumerate(6, forbid.as_ptr()) });
        let lines: Vec<&str> = listing.lines().collect();
        assert_eq!(lines.len(), 18);
        assert_eq!(lines[0], "6R");
        assert_eq!(lines[17], "3B+2B+1B");
    }

    #[test]
    fn enumerate_reports_cap_errors() {
        let out = unsafe { qpi_enumerate(1000, ptr::null()) };
        assert!(out.is_null());
        let message = unsafe { CStr::from_ptr(qpi_last_error()) };
        assert!(!message.to_str().unwrap().is_empty());
    }

    #[test]
    fn multisum_rejects_unknown_family() {
        let family = CString::new("Z").unwrap();
        let out = unsafe { qpi_multisum(family.as_ptr(), 3, 0, 1, 10, false) };
        assert!(out.is_null());
    }

    #[test]
    fn certificate_find_and_check_roundtrip() {
        let target = CString::new("proofE").unwrap();
        let mut json: *mut c_char = ptr::null_mut();
        let status = unsafe { qpi_certificate_find(target.as_ptr(), &mut json) };
        assert_eq!(status, QpiStatus::Ok);
        let text = take_string(json);
        let json_c = CString::new(text).unwrap();
        assert_eq!(unsafe { qpi_certificate_check(json_c.as_ptr()) }, QpiStatus::Ok);
    }

    #[test]
    fn certificate_check_rejects_garbage() {
        let garbage = CString::new("not json").unwrap();
        assert_eq!(
            unsafe { qpi_certificate_check(garbage.as_ptr()) },
            QpiStatus::InvalidArgument
        );
    }

    #[test]
    fn version_is_static() {
        let version = unsafe { CStr::from_ptr(qpi_version()) };
        assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn header_was_generated() {
        let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/qpi.h");
        let text = std::fs::read_to_string(header).expect("header exists");
        assert!(text.contains("qpi_verify_all"));
        assert!(text.contains("QPI_STATUS_WINDOW_EXHAUSTED"));
        assert!(text.contains("typedef struct QpiReportSet QpiReportSet;"));
    }
}
