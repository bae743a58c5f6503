//! C ABI for epival. Objects cross the boundary as opaque handles owned by
//! the caller and released with the matching `_free` function. Every call
//! returns an `EpivalStatus`; on failure `epival_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epival::convexfn::{AffineFunction, CellPA, Conjugate, MaxAffine};
use epival::decompose::homogeneous_components;
use epival::geometry::Polyhedron;
use epival::hessian::{hessian_measure, Window};
use epival::io::to_json_string;
use epival::valuations::{dual_zeta_valuation, zeta_oracle, zeta_valuation, TestFunction};
use epival::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpivalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numeric = 3,
    Panic = 4,
}

/// Finite maximum of affine functions.
pub struct EpivalMaxAffine(MaxAffine);
/// Convex PA function with bounded domain.
pub struct EpivalCellPa(CellPA);
/// Compactly supported weight.
pub struct EpivalTestFunction(TestFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EpivalStatus {
    match e {
        Error::DegenerateInput(_)
        | Error::Unbounded
        | Error::EmptyDomain
        | Error::RankDeficient(_)
        | Error::RetryExhausted(_)
        | Error::DegreeTooLarge(_)
        | Error::NotConvex(_)
        | Error::OracleFailure(_) => EpivalStatus::Numeric,
        _ => EpivalStatus::InvalidInput,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EpivalStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EpivalStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EpivalStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            EpivalStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, what: &'static str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidInput(format!("{what} is not UTF-8"))))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn epival_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn epival_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `max_i (<slopes[i*dim..], x> + intercepts[i])` over `count` pieces.
///
/// # Safety
/// `slopes` holds `count * dim` values, `intercepts` holds `count`.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_new(
    dim: usize,
    count: usize,
    slopes: *const f64,
    intercepts: *const f64,
    out: *mut *mut EpivalMaxAffine,
) -> EpivalStatus {
    guard(|| {
        let a = slice(slopes, count * dim, "slopes")?;
        let b = slice(intercepts, count, "intercepts")?;
        let pieces = (0..count)
            .map(|i| AffineFunction::new(a[i * dim..(i + 1) * dim].to_vec(), b[i]))
            .collect::<epival::Result<Vec<_>>>()?;
        put(out, EpivalMaxAffine(MaxAffine::new(dim, pieces)?))
    })
}

/// Parses the JSON form `{"dim", "pieces"}`.
///
/// # Safety
/// `json` is a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_from_json(json: *const c_char, out: *mut *mut EpivalMaxAffine) -> EpivalStatus {
    guard(|| {
        let v: MaxAffine = epival::io::parse_json(text(json, "json")?)?;
        put(out, EpivalMaxAffine(v))
    })
}

/// Parses the JSON form `{"dim", "cells"}`.
///
/// # Safety
/// `json` is a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_from_json(json: *const c_char, out: *mut *mut EpivalCellPa) -> EpivalStatus {
    guard(|| {
        let u: CellPA = epival::io::parse_json(text(json, "json")?)?;
        put(out, EpivalCellPa(u))
    })
}

/// Convex PA function interpolating `values` at the `count` points of
/// dimension `dim`, with domain their hull.
///
/// # Safety
/// `points` holds `count * dim` values, `values` holds `count`.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_from_vertex_values(
    dim: usize,
    count: usize,
    points: *const f64,
    values: *const f64,
    out: *mut *mut EpivalCellPa,
) -> EpivalStatus {
    guard(|| {
        let p = slice(points, count * dim, "points")?;
        let v = slice(values, count, "values")?;
        let data = (0..count).map(|i| (p[i * dim..(i + 1) * dim].to_vec(), v[i])).collect();
        put(out, EpivalCellPa(CellPA::from_vertex_values(dim, data)?))
    })
}

/// `c (1 - |y|^2 / rho^2)_+^k`.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epival_test_function_bump(
    dim: usize,
    c: f64,
    rho: f64,
    k: u32,
    out: *mut *mut EpivalTestFunction,
) -> EpivalStatus {
    guard(|| put(out, EpivalTestFunction(TestFunction::bump(dim, c, rho, k)?)))
}

/// Parses the JSON form `{"dim", "poly", "rho", "k"}`.
///
/// # Safety
/// `json` is a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn epival_test_function_from_json(
    json: *const c_char,
    out: *mut *mut EpivalTestFunction,
) -> EpivalStatus {
    guard(|| {
        let z: TestFunction = epival::io::parse_json(text(json, "json")?)?;
        put(out, EpivalTestFunction(z))
    })
}

/// # Safety
/// `h` is null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_free(h: *mut EpivalMaxAffine) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_free(h: *mut EpivalCellPa) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is null or a handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn epival_test_function_free(h: *mut EpivalTestFunction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a valid handle, `x` holds `dim` values and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_eval(
    h: *const EpivalMaxAffine,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        let v = &deref(h, "function")?.0;
        if dim != v.dim() {
            return Err(Error::DimensionMismatch { expected: v.dim(), got: dim }.into());
        }
        out_slice(out, 1, "out")?[0] = v.eval(slice(x, dim, "x")?);
        Ok(())
    })
}

/// Value at `x`; `+inf` outside the domain.
///
/// # Safety
/// `h` is a valid handle, `x` holds `dim` values and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_eval(
    h: *const EpivalCellPa,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        let u = &deref(h, "function")?.0;
        if dim != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: dim }.into());
        }
        out_slice(out, 1, "out")?[0] = u.eval(slice(x, dim, "x")?);
        Ok(())
    })
}

/// # Safety
/// `h` is a valid handle and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_conjugate(h: *const EpivalMaxAffine, out: *mut *mut EpivalCellPa) -> EpivalStatus {
    guard(|| put(out, EpivalCellPa(deref(h, "function")?.0.conjugate()?)))
}

/// # Safety
/// `h` is a valid handle and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_conjugate(h: *const EpivalCellPa, out: *mut *mut EpivalMaxAffine) -> EpivalStatus {
    guard(|| put(out, EpivalMaxAffine(deref(h, "function")?.0.conjugate()?)))
}

/// `∫ ζ(∇u) dx` over the domain of `u`.
///
/// # Safety
/// Handles are valid and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_zeta_valuation(
    zeta: *const EpivalTestFunction,
    u: *const EpivalCellPa,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        out_slice(out, 1, "out")?[0] = zeta_valuation(&deref(zeta, "weight")?.0, &deref(u, "function")?.0)?;
        Ok(())
    })
}

/// Dual form on a finite function: sum over kinks of `ζ(x) vol(∂v(x))`.
///
/// # Safety
/// Handles are valid and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_dual_zeta_valuation(
    zeta: *const EpivalTestFunction,
    v: *const EpivalMaxAffine,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        out_slice(out, 1, "out")?[0] = dual_zeta_valuation(&deref(zeta, "weight")?.0, &deref(v, "function")?.0)?;
        Ok(())
    })
}

/// Hessian measures `Θ_0..Θ_n` of the box window `[b_lo, b_hi] × [c_lo, c_hi]`,
/// written to `out[0..=n]`.
///
/// # Safety
/// The corner arrays hold `dim` values each and `out` holds `dim + 1`.
#[no_mangle]
pub unsafe extern "C" fn epival_hessian_measures(
    u: *const EpivalCellPa,
    dim: usize,
    b_lo: *const f64,
    b_hi: *const f64,
    c_lo: *const f64,
    c_hi: *const f64,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        let u = &deref(u, "function")?.0;
        if dim != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: dim }.into());
        }
        let b = Polyhedron::cuboid(slice(b_lo, dim, "b_lo")?, slice(b_hi, dim, "b_hi")?)?;
        let c = Polyhedron::cuboid(slice(c_lo, dim, "c_lo")?, slice(c_hi, dim, "c_hi")?)?;
        let t = hessian_measure(u, &Window::new(b, c)?)?;
        out_slice(out, dim + 1, "out")?.copy_from_slice(&t.values);
        Ok(())
    })
}

/// Homogeneous components `Z_0(u)..Z_n(u)` of the weight's valuation,
/// written to `out[0..=n]`.
///
/// # Safety
/// Handles are valid and `out` holds `n + 1` values.
#[no_mangle]
pub unsafe extern "C" fn epival_homogeneous_components(
    zeta: *const EpivalTestFunction,
    u: *const EpivalCellPa,
    n: usize,
    out: *mut f64,
) -> EpivalStatus {
    guard(|| {
        let z = zeta_oracle(&deref(zeta, "weight")?.0);
        let comps = homogeneous_components(&z, &deref(u, "function")?.0, n)?;
        out_slice(out, n + 1, "out")?.copy_from_slice(&comps);
        Ok(())
    })
}

/// JSON form of a function; release with `epival_string_free`.
///
/// # Safety
/// `h` is a valid handle and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_cell_pa_to_json(h: *const EpivalCellPa, out: *mut *mut c_char) -> EpivalStatus {
    guard(|| json_out(to_json_string(&deref(h, "function")?.0)?, out))
}

/// JSON form of a function; release with `epival_string_free`.
///
/// # Safety
/// `h` is a valid handle and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn epival_max_affine_to_json(h: *const EpivalMaxAffine, out: *mut *mut c_char) -> EpivalStatus {
    guard(|| json_out(to_json_string(&deref(h, "function")?.0)?, out))
}

unsafe fn json_out(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output string"));
    }
    *out = CString::new(s).expect("JSON has no nul").into_raw();
    Ok(())
}

/// # Safety
/// `s` is null or a string returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn epival_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
