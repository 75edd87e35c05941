use std::ffi::{c_char, CStr};
use std::ptr;

use qpoch_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { qp_string_free(s) };
    out
}

fn last_error() -> String {
    let p = qp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn engine() -> *mut QpEngine {
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qp_engine_new(40, &mut e) }, QpStatus::Ok);
    e
}

#[test]
fn engine_lifecycle_and_w0() {
    let e = engine();
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { qp_engine_w0(e, &mut re, &mut im) }, QpStatus::Ok);
    assert!((re - 0.9161978162068626).abs() < 1e-14);
    assert!((im + 0.18245889720714118).abs() < 1e-14);
    unsafe { qp_engine_free(e) };
    unsafe { qp_engine_free(ptr::null_mut()) };
}

#[test]
fn asym_first_table_row() {
    let e = engine();
    let mut s = ptr::null_mut();
    let st = unsafe { qp_asym_laurent_string(e, 1, 0, -1, 2500, 7, 18, &mut s) };
    assert_eq!(st, QpStatus::Ok);
    assert_eq!(take_string(s), "3.83861799348650473e67");
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { qp_asym_laurent(e, 1, 0, -1, 2500, 7, &mut re, &mut im) }, QpStatus::Ok);
    assert!((re / 3.8386179934865047e67 - 1.0).abs() < 1e-14);
    assert!(im.abs() < 1e-30 * re.abs());
    unsafe { qp_engine_free(e) };
}

#[test]
fn asym_wave_table_row() {
    let e = engine();
    let mut w = 0.0;
    assert_eq!(unsafe { qp_asym_wave(e, 4, 4000, 3000, 7, &mut w) }, QpStatus::Ok);
    assert!((w / -1.1889188816772328e23 - 1.0).abs() < 1e-14, "{w}");
    unsafe { qp_engine_free(e) };
}

#[test]
fn wave_value_matches_exact() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qp_wave_value(3, 40, 55, 25, &mut s) }, QpStatus::Ok);
    let approx: f64 = take_string(s).parse().unwrap();
    assert_eq!(unsafe { qp_wave_exact_string(3, 40, 55, &mut s) }, QpStatus::Ok);
    let exact = take_string(s);
    let (p, q) = exact.split_once('/').unwrap_or((&exact, "1"));
    let exact = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
    assert!((approx / exact - 1.0).abs() < 1e-12, "{approx} vs {exact}");
}

#[test]
fn exact_strings() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qp_exact_laurent_string(3, 1, -1, 7, &mut s) }, QpStatus::Ok);
    assert_eq!(take_string(s), "7/324 - 31/972*xi");
    assert_eq!(unsafe { qp_wave_exact_string(2, 6, 20, &mut s) }, QpStatus::Ok);
    assert_eq!(take_string(s), "5501/4608");
    assert_eq!(unsafe { qp_laurent_value(1, 0, -1, 200, 20, &mut s) }, QpStatus::Ok);
    assert!(take_string(s).starts_with("3.21168112527887750"));
}

#[test]
fn error_codes() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qp_exact_laurent_string(4, 2, 0, 10, &mut s) }, QpStatus::InvalidParameter);
    assert!(last_error().contains("gcd"));
    assert_eq!(unsafe { qp_exact_laurent_string(1, 0, 0, 5000, &mut s) }, QpStatus::ResourceLimit);
    assert_eq!(unsafe { qp_exact_laurent_string(1, 0, 0, 5, ptr::null_mut()) }, QpStatus::NullPointer);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qp_engine_new(10, &mut e) }, QpStatus::InvalidParameter);
    assert!(e.is_null());
    let mut w = 0.0;
    assert_eq!(unsafe { qp_asym_wave(ptr::null(), 1, 10, 10, 1, &mut w) }, QpStatus::NullPointer);
    // a successful call clears the message
    assert_eq!(unsafe { qp_wave_exact_string(1, 3, 3, &mut s) }, QpStatus::Ok);
    take_string(s);
    assert!(qp_last_error().is_null());
}

#[test]
fn double_overflow_is_reported() {
    let e = engine();
    let (mut re, mut im) = (0.0, 0.0);
    // |A| grows like |w0|^(-N); far beyond double range here
    let st = unsafe { qp_asym_laurent(e, 1, 0, 0, 20000, 1, &mut re, &mut im) };
    assert_eq!(st, QpStatus::Unrepresentable);
    unsafe { qp_engine_free(e) };
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qpoch.h")).unwrap();
    for name in [
        "qp_last_error",
        "qp_string_free",
        "qp_engine_new",
        "qp_engine_free",
        "qp_engine_w0",
        "qp_asym_laurent",
        "qp_asym_laurent_string",
        "qp_asym_wave",
        "qp_exact_laurent_string",
        "qp_laurent_value",
        "qp_wave_exact_string",
        "qp_wave_value",
        "QP_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
