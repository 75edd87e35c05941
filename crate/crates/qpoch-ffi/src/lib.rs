//! C ABI for qpoch.
//!
//! Every function returns a [`QpStatus`]. On failure a message is stored per
//! thread and can be read with [`qp_last_error`]. Strings handed out by the
//! library must be released with [`qp_string_free`], engines with
//! [`qp_engine_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qpoch::cli_app::Engine;
use qpoch::exact_coeffs::{a_exact, a_validated, wave_exact, wave_validated, CoeffRequest};
use qpoch::hp_analysis::BigComplex;
use qpoch::QsError;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    InvalidParameter = 1,
    Convergence = 2,
    Branch = 3,
    ResourceLimit = 4,
    /// A result would not fit the requested representation.
    Unrepresentable = 5,
    NullPointer = 6,
    Internal = 7,
}

/// Saddle constants and cached expansion contexts at a fixed precision.
pub struct QpEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum FfiError {
    Core(QsError),
    Null(&'static str),
    Unrepresentable(&'static str),
}

impl From<QsError> for FfiError {
    fn from(e: QsError) -> Self {
        FfiError::Core(e)
    }
}

type FfiResult = Result<(), FfiError>;

fn status_of(e: &FfiError) -> (QpStatus, String) {
    match e {
        FfiError::Null(what) => (QpStatus::NullPointer, format!("null pointer: {what}")),
        FfiError::Unrepresentable(msg) => (QpStatus::Unrepresentable, msg.to_string()),
        FfiError::Core(e) => {
            let s = match e {
                QsError::Convergence(..) => QpStatus::Convergence,
                QsError::Branch(..) => QpStatus::Branch,
                QsError::ResourceLimit(..) => QpStatus::ResourceLimit,
                _ => QpStatus::InvalidParameter,
            };
            (s, e.to_string())
        }
    }
}

/// Run `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> FfiResult>(f: F) -> QpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QpStatus::Ok,
        Ok(Err(e)) => {
            let (s, msg) = status_of(&e);
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            QpStatus::Internal
        }
    }
}

fn write_complex(v: &BigComplex, re: *mut f64, im: *mut f64) -> FfiResult {
    if re.is_null() || im.is_null() {
        return Err(FfiError::Null("output"));
    }
    let (r, i) = v.to_c64();
    if !r.is_finite() || !i.is_finite() {
        return Err(FfiError::Unrepresentable("value outside double range; use the string variant"));
    }
    // SAFETY: both pointers checked non-null; the caller guarantees validity.
    unsafe {
        *re = r;
        *im = i;
    }
    Ok(())
}

fn write_string(s: String, out: *mut *mut c_char) -> FfiResult {
    if out.is_null() {
        return Err(FfiError::Null("output"));
    }
    let c = CString::new(s).map_err(|_| FfiError::Unrepresentable("string contains nul"))?;
    // SAFETY: out checked non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn engine_ref<'a>(e: *const QpEngine) -> Result<&'a QpEngine, FfiError> {
    // SAFETY: a non-null handle was produced by qp_engine_new and not yet freed.
    unsafe { e.as_ref() }.ok_or(FfiError::Null("engine"))
}

/// Last error message on this thread, or null. Valid until the next call on
/// the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create an engine working with `digits` significant decimal digits (at least 30).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qp_engine_new(digits: u32, out: *mut *mut QpEngine) -> QpStatus {
    guard(|| {
        if out.is_null() {
            return Err(FfiError::Null("out"));
        }
        if digits < 30 {
            return Err(QsError::InvalidParameter("precision must be at least 30 digits".into()).into());
        }
        let engine = Box::new(QpEngine { inner: Engine::new(digits)? });
        *out = Box::into_raw(engine);
        Ok(())
    })
}

/// Destroy an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from [`qp_engine_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qp_engine_free(engine: *mut QpEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// The dilogarithm zero `w0` as doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qp_engine_w0(engine: *const QpEngine, re: *mut f64, im: *mut f64) -> QpStatus {
    guard(|| write_complex(&engine_ref(engine)?.inner.constants.w0, re, im))
}

/// Asymptotic approximation of `A_m(e^(2 pi i h/k), N)` with `r` terms, as doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qp_asym_laurent(
    engine: *const QpEngine,
    k: u32,
    h: i64,
    m: i64,
    big_n: u32,
    r: u32,
    re: *mut f64,
    im: *mut f64,
) -> QpStatus {
    guard(|| {
        let v = asym_laurent(engine, k, h, m, big_n, r)?;
        write_complex(&v, re, im)
    })
}

/// Same as [`qp_asym_laurent`] but as a decimal string with `digits` significant digits.
///
/// # Safety
/// Pointers must be valid; free the result with [`qp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_asym_laurent_string(
    engine: *const QpEngine,
    k: u32,
    h: i64,
    m: i64,
    big_n: u32,
    r: u32,
    digits: u32,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let v = asym_laurent(engine, k, h, m, big_n, r)?;
        write_string(v.to_decimal(digits.max(1) as usize), out)
    })
}

fn asym_laurent(engine: *const QpEngine, k: u32, h: i64, m: i64, big_n: u32, r: u32) -> Result<BigComplex, FfiError> {
    let e = engine_ref(engine)?;
    if r == 0 {
        return Err(QsError::InvalidParameter("r must be at least 1".into()).into());
    }
    let req = CoeffRequest::new(m, k, if k == 1 { 0 } else { h }, big_n);
    req.validate()?;
    Ok(e.inner.asym_laurent(req.k, req.h, m, big_n, r as usize)?)
}

/// Asymptotic approximation of the wave `W_k(N, n)` with `r` terms.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qp_asym_wave(engine: *const QpEngine, k: u32, big_n: u32, n: i64, r: u32, out: *mut f64) -> QpStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        if out.is_null() {
            return Err(FfiError::Null("out"));
        }
        if r == 0 || k == 0 || big_n == 0 {
            return Err(QsError::InvalidParameter("k, N and r must be positive".into()).into());
        }
        let v = e.inner.asym_wave(k, big_n, n, r as usize)?.to_f64();
        if !v.is_finite() {
            return Err(FfiError::Unrepresentable("value outside double range; use the string variant"));
        }
        *out = v;
        Ok(())
    })
}

/// Exact `A_m(e^(2 pi i h/k), N)` as a string: an element of `Q(xi)` in powers
/// of `xi = e^(2 pi i/k)`. `M = floor(N/k) + m` is limited to 2000.
///
/// # Safety
/// `out` must be valid; free the result with [`qp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_exact_laurent_string(k: u32, h: i64, m: i64, big_n: u32, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let req = CoeffRequest::new(m, k, if k == 1 { 0 } else { h }, big_n);
        req.validate()?;
        if req.big_m() > 2000 {
            return Err(QsError::ResourceLimit("exact rational value limited to M <= 2000; use qp_laurent_value".into()).into());
        }
        write_string(a_exact(&req)?.to_string(), out)
    })
}

/// `A_m(e^(2 pi i h/k), N)` to at least `digits` verified digits, as a decimal string.
///
/// # Safety
/// `out` must be valid; free the result with [`qp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_laurent_value(k: u32, h: i64, m: i64, big_n: u32, digits: u32, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let req = CoeffRequest::new(m, k, if k == 1 { 0 } else { h }, big_n);
        req.validate()?;
        let v = a_validated(&req, digits.max(1))?;
        write_string(v.value.to_decimal(digits.max(1) as usize), out)
    })
}

/// Exact wave `W_k(N, n)` as a reduced fraction `p/q`. `N` is limited to 2000.
///
/// # Safety
/// `out` must be valid; free the result with [`qp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_wave_exact_string(k: u32, big_n: u32, n: i64, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        if big_n > 2000 {
            return Err(QsError::ResourceLimit("exact wave limited to N <= 2000; use qp_wave_value".into()).into());
        }
        write_string(wave_exact(k, big_n, n)?.to_string(), out)
    })
}

/// `W_k(N, n)` to at least `digits` verified digits, as a decimal string.
///
/// # Safety
/// `out` must be valid; free the result with [`qp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qp_wave_value(k: u32, big_n: u32, n: i64, digits: u32, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let v = wave_validated(k, big_n, n, digits.max(1))?;
        write_string(qpoch::hp_analysis::format_float(&v.value, digits.max(1) as usize), out)
    })
}
