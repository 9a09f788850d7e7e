//! C ABI for `sqhom`.
//!
//! Simplicial sets cross the boundary as opaque [`SqhomSet`] handles built
//! from spec documents. Every fallible function returns a [`SqhomStatus`];
//! on failure the message is kept per thread and read back with
//! [`sqhom_last_error_message`]. Strings handed out by the library are
//! released with [`sqhom_string_free`].
//!
//! The header `include/sqhom.h` is generated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sqhom::cli::{execute, parse_spec, Cli, ParsedSpec};
use sqhom::homology::{betti, BettiMethod};
use sqhom::qsim::{qpe_betti, QpeConfig};
use sqhom::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqhomStatus {
    Ok = 0,
    InvalidInput = 1,
    DegreeOutOfRange = 2,
    NoTarget = 3,
    Unsupported = 4,
    AmbiguousSpectrum = 5,
    Config = 6,
    InvariantViolation = 7,
    NullPointer = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

/// Betti number methods available through [`sqhom_betti`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqhomBettiMethod {
    ExactRank = 0,
    Hodge = 1,
    NormalizedHodge = 2,
}

/// A validated truncated simplicial set.
pub struct SqhomSet {
    spec: ParsedSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SqhomStatus {
    match e {
        Error::InvalidInput(_) => SqhomStatus::InvalidInput,
        Error::DegreeOutOfRange { .. } => SqhomStatus::DegreeOutOfRange,
        Error::NoTarget(_) => SqhomStatus::NoTarget,
        Error::Unsupported(_) => SqhomStatus::Unsupported,
        Error::AmbiguousSpectrum { .. } => SqhomStatus::AmbiguousSpectrum,
        Error::Config(_) => SqhomStatus::Config,
        Error::InvariantViolation(_) => SqhomStatus::InvariantViolation,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (SqhomStatus, String)>) -> SqhomStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SqhomStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside sqhom".into());
            SqhomStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SqhomStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SqhomStatus, String) {
    (SqhomStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a nul-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SqhomStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SqhomStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to a live handle.
unsafe fn handle<'a>(p: *const SqhomSet) -> Result<&'a SqhomSet, (SqhomStatus, String)> {
    p.as_ref().ok_or_else(|| null("set handle"))
}

/// # Safety
/// `p` must be null or valid for a write of `T`.
unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), (SqhomStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn sqhom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// nul-terminated) and returns the length of the full message plus one.
/// Returns 0 when there is no message.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sqhom_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Parses and validates a spec document.
///
/// # Safety
/// `spec_json` must be a nul-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_set_from_spec(spec_json: *const c_char, out: *mut *mut SqhomSet) -> SqhomStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output handle"));
        }
        let spec = parse_spec(text(spec_json, "spec")?).map_err(lib)?;
        write(out, Box::into_raw(Box::new(SqhomSet { spec })), "output handle")
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `set` must be null or a handle from [`sqhom_set_from_spec`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqhom_set_free(set: *mut SqhomSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_set_cutoff(set: *const SqhomSet, out: *mut usize) -> SqhomStatus {
    guard(|| write(out, handle(set)?.spec.set.cutoff(), "output"))
}

/// Number of simplices of the given degree.
///
/// # Safety
/// `set` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_set_count(set: *const SqhomSet, degree: usize, out: *mut usize) -> SqhomStatus {
    guard(|| {
        let x = &handle(set)?.spec.set;
        if degree > x.cutoff() {
            return Err(lib(Error::DegreeOutOfRange {
                what: "simplex count".into(),
                degree,
                cutoff: x.cutoff(),
            }));
        }
        write(out, x.count(degree), "output")
    })
}

/// Number of non-degenerate simplices of the given degree.
///
/// # Safety
/// `set` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_set_nondegenerate_count(
    set: *const SqhomSet,
    degree: usize,
    out: *mut usize,
) -> SqhomStatus {
    guard(|| {
        let x = &handle(set)?.spec.set;
        if degree > x.cutoff() {
            return Err(lib(Error::DegreeOutOfRange {
                what: "non-degenerate count".into(),
                degree,
                cutoff: x.cutoff(),
            }));
        }
        write(out, x.nondegenerate(degree).len(), "output")
    })
}

/// `β_n` by the chosen method. `truncation_sensitive` (may be null) is set
/// to 1 when `degree` equals the cutoff.
///
/// # Safety
/// `set` must be a live handle, `out` valid for a write, and
/// `truncation_sensitive` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_betti(
    set: *const SqhomSet,
    method: SqhomBettiMethod,
    degree: usize,
    out: *mut usize,
    truncation_sensitive: *mut c_int,
) -> SqhomStatus {
    guard(|| {
        let m = match method {
            SqhomBettiMethod::ExactRank => BettiMethod::ExactRank,
            SqhomBettiMethod::Hodge => BettiMethod::Hodge,
            SqhomBettiMethod::NormalizedHodge => BettiMethod::NormalizedHodge,
        };
        let r = betti(&handle(set)?.spec.set, degree, m).map_err(lib)?;
        if !truncation_sensitive.is_null() {
            truncation_sensitive.write(c_int::from(r.truncation_sensitive));
        }
        write(out, r.value, "output")
    })
}

/// Phase-estimation estimate of `β_n` with `shots` seeded samples.
/// `p_zero` (may be null) receives the exact probability of clock value 0.
///
/// # Safety
/// `set` must be a live handle, `estimate` valid for a write, and `p_zero`
/// null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sqhom_qpe_betti(
    set: *const SqhomSet,
    degree: usize,
    clock_bits: u32,
    shots: usize,
    seed: u64,
    estimate: *mut usize,
    p_zero: *mut f64,
) -> SqhomStatus {
    guard(|| {
        let out = qpe_betti(&handle(set)?.spec.set, degree, &QpeConfig::new(clock_bits, shots, seed)).map_err(lib)?;
        if !p_zero.is_null() {
            p_zero.write(out.report.p_zero);
        }
        write(estimate, out.report.betti_estimate, "estimate")
    })
}

/// Runs a command-line invocation on a spec given as text and hands back
/// the JSON report. `argv` holds the arguments after the program name, with
/// `-` in place of the spec path. `exit_code` receives 0, 2 or 3 as the
/// tool would exit; the call itself succeeds whenever a report was produced.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings, `spec_json` must be
/// nul-terminated, `report` and `exit_code` valid for writes, and `seed_env`
/// null or nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn sqhom_run(
    argv: *const *const c_char,
    argc: usize,
    spec_json: *const c_char,
    seed_env: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> SqhomStatus {
    guard(|| {
        if report.is_null() || exit_code.is_null() {
            return Err(null("output"));
        }
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["sqhom".to_string()];
        for k in 0..argc {
            args.push(text(*argv.add(k), "argument")?.to_string());
        }
        let cli = Cli::try_parse_from_args(&args).map_err(|e| (SqhomStatus::InvalidInput, e))?;
        let seed_env = if seed_env.is_null() { None } else { Some(text(seed_env, "seed")?) };
        let outcome = execute(&cli, text(spec_json, "spec")?, seed_env);
        let json = CString::new(outcome.report.to_json()).expect("JSON has no nul bytes");
        write(report, json.into_raw(), "report")?;
        write(exit_code, outcome.exit_code, "exit code")
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sqhom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
