use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use sqhom_ffi::*;

const Z2: &str = r#"{"kind":"nerve_group","group":{"order":2},"truncation":3}"#;

fn set_from(spec: &str) -> (*mut SqhomSet, SqhomStatus) {
    let spec = CString::new(spec).unwrap();
    let mut set = ptr::null_mut();
    let status = unsafe { sqhom_set_from_spec(spec.as_ptr(), &mut set) };
    (set, status)
}

fn last_error() -> String {
    let needed = unsafe { sqhom_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0 as c_char; needed];
    unsafe { sqhom_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn handle_lifecycle_and_queries() {
    let (set, status) = set_from(Z2);
    assert_eq!(status, SqhomStatus::Ok);
    let mut v = 0usize;
    unsafe {
        assert_eq!(sqhom_set_cutoff(set, &mut v), SqhomStatus::Ok);
        assert_eq!(v, 3);
        assert_eq!(sqhom_set_count(set, 3, &mut v), SqhomStatus::Ok);
        assert_eq!(v, 8);
        assert_eq!(sqhom_set_nondegenerate_count(set, 3, &mut v), SqhomStatus::Ok);
        assert_eq!(v, 1);
        let mut flagged: c_int = -1;
        for method in [SqhomBettiMethod::ExactRank, SqhomBettiMethod::Hodge, SqhomBettiMethod::NormalizedHodge] {
            assert_eq!(sqhom_betti(set, method, 1, &mut v, &mut flagged), SqhomStatus::Ok);
            assert_eq!((v, flagged), (0, 0));
        }
        let mut p0 = f64::NAN;
        assert_eq!(sqhom_qpe_betti(set, 0, 8, 1000, 42, &mut v, &mut p0), SqhomStatus::Ok);
        assert_eq!(v, 1);
        assert!((p0 - 1.0).abs() < 1e-12);
        sqhom_set_free(set);
        sqhom_set_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_codes_and_messages() {
    let (set, status) = set_from(r#"{"kind":"nerve_group","group":{"table":[[0,1],[0,1]]},"truncation":2}"#);
    assert_eq!(status, SqhomStatus::InvalidInput);
    assert!(set.is_null());
    assert!(last_error().contains("/group"), "{}", last_error());

    let (set, _) = set_from(Z2);
    let mut v = 0usize;
    unsafe {
        assert_eq!(sqhom_set_count(set, 4, &mut v), SqhomStatus::DegreeOutOfRange);
        assert_eq!(sqhom_set_count(ptr::null(), 0, &mut v), SqhomStatus::NullPointer);
        assert_eq!(sqhom_set_count(set, 0, ptr::null_mut()), SqhomStatus::NullPointer);
        assert_eq!(sqhom_qpe_betti(set, 1, 0, 10, 0, &mut v, ptr::null_mut()), SqhomStatus::Config);
        assert_eq!(sqhom_set_from_spec(ptr::null(), &mut ptr::null_mut()), SqhomStatus::NullPointer);
        sqhom_set_free(set);
    }
    let bad = [0xffu8, 0];
    let mut out = ptr::null_mut();
    let status = unsafe { sqhom_set_from_spec(bad.as_ptr().cast(), &mut out) };
    assert_eq!(status, SqhomStatus::InvalidUtf8);
}

#[test]
fn truncated_message_is_terminated() {
    let _ = set_from("{");
    let mut buf = [1 as c_char; 8];
    let full = unsafe { sqhom_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(full > buf.len());
    assert_eq!(buf[7], 0);
}

fn run(args: &[&str], spec: &str) -> (String, c_int, SqhomStatus) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let spec = CString::new(spec).unwrap();
    let mut report = ptr::null_mut();
    let mut code: c_int = -1;
    let status =
        unsafe { sqhom_run(argv.as_ptr(), argv.len(), spec.as_ptr(), ptr::null(), &mut report, &mut code) };
    let text = if report.is_null() {
        String::new()
    } else {
        let s = unsafe { CStr::from_ptr(report) }.to_string_lossy().into_owned();
        unsafe { sqhom_string_free(report) };
        s
    };
    (text, code, status)
}

#[test]
fn commands_run_through_the_abi() {
    let (a, code, status) = run(&["qsim", "qpe", "-", "--seed", "42", "--shots", "100"], Z2);
    assert_eq!((status, code), (SqhomStatus::Ok, 0));
    let (b, _, _) = run(&["qsim", "qpe", "-", "--seed", "42", "--shots", "100"], Z2);
    assert_eq!(a, b);
    let (_, code, status) = run(&["perfectness", "-"], "{}");
    assert_eq!((status, code), (SqhomStatus::Ok, 2));
    let (_, _, status) = run(&["no-such-command"], Z2);
    assert_eq!(status, SqhomStatus::InvalidInput);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/sqhom.h");
    for name in [
        "sqhom_version",
        "sqhom_last_error_message",
        "sqhom_set_from_spec",
        "sqhom_set_free",
        "sqhom_set_cutoff",
        "sqhom_set_count",
        "sqhom_set_nondegenerate_count",
        "sqhom_betti",
        "sqhom_qpe_betti",
        "sqhom_run",
        "sqhom_string_free",
        "typedef struct SqhomSet SqhomSet",
        "SQHOM_STATUS_INVARIANT_VIOLATION = 7",
    ] {
        assert!(header.contains(name), "{name}");
    }
    let version = unsafe { CStr::from_ptr(sqhom_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
