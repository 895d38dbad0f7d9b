//! C ABI over the verification engine.
//!
//! Reports are opaque handles owned by the caller and released with
//! `ta_report_free`. Strings returned by the library are NUL-terminated,
//! heap-allocated and released with `ta_string_free`. Every fallible call
//! returns a `TaError`; on failure a message is available from
//! `ta_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use theta_anomaly::algebra::Basis;
use theta_anomaly::anomaly::{AnomalyError, Status, VerificationReport};
use theta_anomaly::cli;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InsufficientOrder = 4,
    Computation = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaStatus {
    Pass = 0,
    PassWithVariant = 1,
    Gap = 2,
    Fail = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaBasis {
    Normalized = 0,
    Standard = 1,
}

/// Opaque verification report.
pub struct TaReport {
    inner: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn error_code(e: &AnomalyError) -> TaError {
    match e {
        AnomalyError::InsufficientOrder { .. } => TaError::InsufficientOrder,
        AnomalyError::InvalidK(_)
        | AnomalyError::KTooLarge(_)
        | AnomalyError::InvalidL(_)
        | AnomalyError::LTooLarge(_)
        | AnomalyError::FamilyMismatch { .. }
        | AnomalyError::FixedK { .. }
        | AnomalyError::LTooSmallForCorollary { .. }
        | AnomalyError::Unknown(_) => TaError::InvalidArgument,
        _ => TaError::Computation,
    }
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (TaError, String)>) -> TaError {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TaError::Ok,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {msg}"));
            TaError::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TaError, String)> {
    if p.is_null() {
        return Err((TaError::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TaError::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

fn opt(v: u32) -> Option<u32> {
    (v != 0).then_some(v)
}

/// Verifies a theorem (e.g. `"3.1"`) or divisibility corollary (e.g.
/// `"4.9"`). Pass `k = 0` for statements fixed to one dimension and
/// `qorder = 0` for the default truncation. `m` is only read for
/// divisibility corollaries. On success `*out` receives a new report.
///
/// # Safety
/// `theorem` must be a valid NUL-terminated string and `out` a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ta_verify(
    theorem: *const c_char,
    k: u32,
    l: u32,
    qorder: u32,
    m: u32,
    out: *mut *mut TaReport,
) -> TaError {
    guard(|| {
        if out.is_null() {
            return Err((TaError::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let theorem = read_str(theorem, "theorem")?;
        let rep = cli::verify_report(theorem, opt(k), l, opt(qorder), Some(m), 1)
            .map_err(|e| (error_code(&e), e.to_string()))?;
        *out = Box::into_raw(Box::new(TaReport { inner: rep }));
        Ok(())
    })
}

/// Overall verdict of a report.
///
/// # Safety
/// `report` must be null or a handle from `ta_verify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_report_status(report: *const TaReport, status: *mut TaStatus) -> TaError {
    guard(|| {
        if report.is_null() || status.is_null() {
            return Err((TaError::NullPointer, "report or status is null".into()));
        }
        *status = match (*report).inner.status() {
            Status::Pass => TaStatus::Pass,
            Status::PassWithVariant => TaStatus::PassWithVariant,
            Status::Gap => TaStatus::Gap,
            Status::Fail => TaStatus::Fail,
        };
        Ok(())
    })
}

/// Number of `h_r` coefficients in a report.
///
/// # Safety
/// `report` must be null or a live handle from `ta_verify`.
#[no_mangle]
pub unsafe extern "C" fn ta_report_h_count(report: *const TaReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.h.len())
}

/// JSON form of a report, with polynomials rendered in `basis`. The string
/// must be released with `ta_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_report_json(report: *const TaReport, basis: TaBasis, out: *mut *mut c_char) -> TaError {
    guard(|| {
        if report.is_null() || out.is_null() {
            return Err((TaError::NullPointer, "report or out is null".into()));
        }
        let basis = match basis {
            TaBasis::Normalized => Basis::Normalized,
            TaBasis::Standard => Basis::Standard,
        };
        let v = (*report).inner.to_json(basis);
        *out = into_c_string(serde_json::to_string(&v).expect("serializable"));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from `ta_verify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_report_free(report: *mut TaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Runs the command-line interface in-process. `argv` excludes the program
/// name. Standard output is captured into `*output` (release with
/// `ta_string_free`); the command's exit code is stored in `*exit_code`.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings; `output` and
/// `exit_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ta_cli_run(
    argv: *const *const c_char,
    argc: usize,
    output: *mut *mut c_char,
    exit_code: *mut i32,
) -> TaError {
    guard(|| {
        if output.is_null() || exit_code.is_null() || (argv.is_null() && argc > 0) {
            return Err((TaError::NullPointer, "argv, output or exit_code is null".into()));
        }
        *output = ptr::null_mut();
        let mut args = vec!["theta-anomaly".to_string()];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argument")?.to_string());
        }
        let mut buf = Vec::new();
        *exit_code = cli::run(args, &mut buf);
        *output = into_c_string(String::from_utf8_lossy(&buf).into_owned());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ta_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ta_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
