//! C ABI over `twisted_orlicz`.
//!
//! Objects are opaque handles created by `tw_*_parse`/`tw_*_new` and released
//! by the matching `tw_*_free`. Every fallible call returns a [`TwStatus`];
//! on failure `tw_last_error()` describes the problem for the calling thread.
//! Strings returned through out-pointers are owned by the caller and must be
//! released with `tw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use twisted_orlicz::cocycles::Cocycle;
use twisted_orlicz::orlicz::{luxemburg_norm, orlicz_norm, weighted_norm, SpaceContext, SupportedFunction};
use twisted_orlicz::{elem, suite, twisted, Error, Group, Weight, YoungPair};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Budget = 5,
    Numeric = 6,
    Io = 7,
    Panic = 8,
}

pub struct TwGroup {
    inner: Group,
}

pub struct TwPair {
    inner: YoungPair,
}

pub struct TwWeight {
    inner: Weight,
}

pub struct TwCocycle {
    inner: Cocycle,
}

pub struct TwFunction {
    inner: SupportedFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TwStatus {
    match e {
        _ if e.is_budget() => TwStatus::Budget,
        Error::Spec { .. } | Error::FunctionFile(_) | Error::Json(_) => TwStatus::Parse,
        Error::Io(_) => TwStatus::Io,
        Error::DegenerateFit(_)
        | Error::ZeroCocycle { .. }
        | Error::NotUnimodular { .. }
        | Error::NotRootOfUnity { .. }
        | Error::DominationViolated { .. }
        | Error::CoboundaryMismatch { .. }
        | Error::NoThreshold { .. } => TwStatus::Numeric,
        _ => TwStatus::InvalidArgument,
    }
}

struct Failure(TwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TwStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TwStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(TwStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(TwStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(TwStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn coords<'a>(p: *const i64, len: usize) -> Result<&'a [i64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(TwStatus::NullPointer, "coordinates are NULL".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next `tw_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_group_free(h: *mut TwGroup) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_pair_free(h: *mut TwPair) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_weight_free(h: *mut TwWeight) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_cocycle_free(h: *mut TwCocycle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_function_free(h: *mut TwFunction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parses a group spec such as `Z^d:2`, `Zn:4x4` or `H3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_group_parse(spec: *const c_char, out: *mut *mut TwGroup) -> TwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let g = Group::parse(str_arg(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(TwGroup { inner: g }));
        Ok(())
    })
}

/// `|B(n)|`, the number of elements of word length at most `n`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_group_ball_size(g: *const TwGroup, n: u32, out: *mut u64) -> TwStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        *out = if n == 0 { 1 } else { *g.inner.ball_sizes(n)?.last().expect("n >= 1") };
        Ok(())
    })
}

/// Word length of an element given by its coordinates.
///
/// # Safety
/// `g` must be a live group handle, `s` must point to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn tw_group_word_length(g: *const TwGroup, s: *const i64, len: usize, out: *mut u32) -> TwStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        *out = g.inner.word_length(&elem(coords(s, len)?))?;
        Ok(())
    })
}

/// Parses a Young pair such as `Lp:2` or `xlog`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_pair_parse(spec: *const c_char, out: *mut *mut TwPair) -> TwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let p = YoungPair::parse(str_arg(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(TwPair { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live group handle, `spec` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tw_weight_parse(g: *const TwGroup, spec: *const c_char, out: *mut *mut TwWeight) -> TwStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        let w = Weight::parse(&g.inner, str_arg(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(TwWeight { inner: w }));
        Ok(())
    })
}

/// # Safety
/// `w` must be a live weight handle, `s` must point to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn tw_weight_value(w: *const TwWeight, s: *const i64, len: usize, out: *mut f64) -> TwStatus {
    guard(|| {
        let w = ref_arg(w, "weight")?;
        let out = out_arg(out, "out")?;
        *out = w.inner.value(&elem(coords(s, len)?))?;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live group handle, `spec` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tw_cocycle_parse(
    g: *const TwGroup,
    spec: *const c_char,
    out: *mut *mut TwCocycle,
) -> TwStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        let c = Cocycle::parse(&g.inner, str_arg(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(TwCocycle { inner: c }));
        Ok(())
    })
}

/// `Ω(s, t)` as real and imaginary parts.
///
/// # Safety
/// `c` must be a live cocycle handle; `s`, `t` must point to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn tw_cocycle_eval(
    c: *const TwCocycle,
    s: *const i64,
    t: *const i64,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TwStatus {
    guard(|| {
        let c = ref_arg(c, "cocycle")?;
        let re = out_arg(out_re, "out_re")?;
        let im = out_arg(out_im, "out_im")?;
        let v = c.inner.eval(&elem(coords(s, len)?), &elem(coords(t, len)?))?;
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// The zero function on `g`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_function_new(g: *const TwGroup, out: *mut *mut TwFunction) -> TwStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(TwFunction { inner: SupportedFunction::zero(&g.inner) }));
        Ok(())
    })
}

/// Adds `re + i im` at the element `s`.
///
/// # Safety
/// `f` must be a live function handle, `s` must point to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn tw_function_add(f: *mut TwFunction, s: *const i64, len: usize, re: f64, im: f64) -> TwStatus {
    guard(|| {
        let f = out_arg(f, "function")?;
        f.inner.add_at(elem(coords(s, len)?), Complex64::new(re, im))?;
        Ok(())
    })
}

/// Number of support points.
///
/// # Safety
/// `f` must be a live function handle.
#[no_mangle]
pub unsafe extern "C" fn tw_function_len(f: *const TwFunction, out: *mut usize) -> TwStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(f, "function")?.inner.len();
        Ok(())
    })
}

/// Parses the JSON function-file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_function_from_json(json: *const c_char, out: *mut *mut TwFunction) -> TwStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let f = SupportedFunction::from_json(str_arg(json, "json")?, None)?;
        *out = Box::into_raw(Box::new(TwFunction { inner: f }));
        Ok(())
    })
}

/// Serializes to the JSON function-file format; free with `tw_string_free`.
///
/// # Safety
/// `f` must be a live function handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_function_to_json(f: *const TwFunction, out: *mut *mut c_char) -> TwStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        *out_arg(out, "out")? = into_c_string(f.inner.to_json());
        Ok(())
    })
}

/// Luxemburg and Orlicz norms; with a non-NULL weight both are of `fω`.
///
/// # Safety
/// `f`, `pair` must be live handles; `w` may be NULL; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_norms(
    f: *const TwFunction,
    pair: *const TwPair,
    w: *const TwWeight,
    out_luxemburg: *mut f64,
    out_orlicz: *mut f64,
) -> TwStatus {
    guard(|| {
        let f = ref_arg(f, "function")?;
        let pair = ref_arg(pair, "pair")?;
        let lux = out_arg(out_luxemburg, "out_luxemburg")?;
        let orl = out_arg(out_orlicz, "out_orlicz")?;
        match w.as_ref() {
            None => {
                *lux = luxemburg_norm(&f.inner, pair.inner.phi());
                *orl = orlicz_norm(&f.inner, &pair.inner);
            }
            Some(w) => {
                let weighted = f.inner.try_map(|s, a| Ok(a * w.inner.value(s)?))?;
                *lux = luxemburg_norm(&weighted, pair.inner.phi());
                *orl = weighted_norm(&f.inner, &SpaceContext::new(pair.inner.clone(), Some(w.inner.clone())))?;
            }
        }
        Ok(())
    })
}

/// `f ⋆_Ω g`.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_convolve(
    f: *const TwFunction,
    g: *const TwFunction,
    omega: *const TwCocycle,
    out: *mut *mut TwFunction,
) -> TwStatus {
    guard(|| {
        let f = ref_arg(f, "f")?;
        let g = ref_arg(g, "g")?;
        let omega = ref_arg(omega, "cocycle")?;
        let out = out_arg(out, "out")?;
        let h = twisted::twisted_convolve(&f.inner, &g.inner, &omega.inner)?;
        *out = Box::into_raw(Box::new(TwFunction { inner: h }));
        Ok(())
    })
}

/// Runs a preset suite (by name) or a suite given as JSON text. Writes the
/// JSON report to `out_report` and 1/0 to `out_pass`.
///
/// # Safety
/// `suite` must be a NUL-terminated string; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tw_run_suite(suite: *const c_char, out_report: *mut *mut c_char, out_pass: *mut i32) -> TwStatus {
    guard(|| {
        let text = str_arg(suite, "suite")?;
        let report_out = out_arg(out_report, "out_report")?;
        let pass_out = out_arg(out_pass, "out_pass")?;
        let spec = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Failure(TwStatus::Parse, e.to_string()))?
        } else {
            suite::preset(text)?
        };
        let report = suite::run_suite(&spec)?;
        *report_out = into_c_string(suite::emit_report(&report, suite::Format::Json));
        *pass_out = report.pass as i32;
        Ok(())
    })
}
