//! C interface to the `rpoisson` verifier.
//!
//! Every entry point returns an [`RpStatus`] and writes its result through an
//! out-pointer. On failure the message is kept per thread and can be read
//! with [`rp_last_error_message`]. Strings returned through out-pointers are
//! owned by the caller and released with [`rp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use rpoisson::cohomology::truncated_betti;
use rpoisson::connection::is_riemann_poisson;
use rpoisson::input::{load_manifold, FoliationSpecFile, Manifold};
use rpoisson::{pipeline, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed spec: schema, syntax or dimension errors.
    InputError = 3,
    /// The input is well formed but the computation failed, e.g. a
    /// non-involutive distribution or a non-Poisson bivector.
    MathError = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Parsed manifold spec. Opaque to C.
pub struct RpManifold {
    inner: Manifold,
    source: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: RpStatus, msg: impl Into<String>) -> RpStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> RpStatus {
    let status = if e.is_input_error() { RpStatus::InputError } else { RpStatus::MathError };
    fail(status, format!("{}: {e}", e.kind()))
}

fn guard(f: impl FnOnce() -> RpStatus + UnwindSafe) -> RpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(f).unwrap_or_else(|_| fail(RpStatus::Panic, "panic inside rpoisson"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RpStatus> {
    if s.is_null() {
        return Err(fail(RpStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(RpStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> RpStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            RpStatus::Ok
        }
        Err(_) => fail(RpStatus::MathError, "output contains a nul byte"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(RpStatus::NullArgument, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Parses a manifold spec.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer. On
/// success `*out` holds a handle to release with [`rp_manifold_free`].
#[no_mangle]
pub unsafe extern "C" fn rp_manifold_from_json(json: *const c_char, out: *mut *mut RpManifold) -> RpStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match load_manifold(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RpManifold { inner, source: text.to_owned() }));
                RpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from [`rp_manifold_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rp_manifold_free(m: *mut RpManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_is_poisson(m: *const RpManifold, out: *mut bool) -> RpStatus {
    guard(|| {
        non_null!(m, out);
        *out = (*m).inner.pi.is_poisson();
        RpStatus::Ok
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_is_riemann_poisson(m: *const RpManifold, out: *mut bool) -> RpStatus {
    guard(|| {
        non_null!(m, out);
        let m = &(*m).inner;
        match is_riemann_poisson(&m.pi, &m.metric) {
            Ok(v) => {
                *out = v;
                RpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Full check pipeline as a JSON report. A failing check is not an error:
/// the report's verdicts say what failed.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_check_report_json(m: *const RpManifold, out: *mut *mut c_char) -> RpStatus {
    guard(|| {
        non_null!(m, out);
        let m = &*m;
        match pipeline::check(&m.inner, &m.inner.name, m.source.as_bytes()) {
            Ok(r) => write_string(out, r.to_json()),
            Err(e) => from_error(e),
        }
    })
}

/// Christoffel table report as JSON.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_christoffel_json(m: *const RpManifold, out: *mut *mut c_char) -> RpStatus {
    guard(|| {
        non_null!(m, out);
        let m = &*m;
        match pipeline::christoffel(&m.inner, &m.inner.name, m.source.as_bytes()) {
            Ok(r) => write_string(out, r.to_json()),
            Err(e) => from_error(e),
        }
    })
}

/// Truncated Betti number of degree `p` with coefficient degree at most `window`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_truncated_betti(m: *const RpManifold, p: usize, window: u32, out: *mut usize) -> RpStatus {
    guard(|| {
        non_null!(m, out);
        match truncated_betti(&(*m).inner.pi, p, window) {
            Ok(b) => {
                *out = b.betti;
                RpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds and certifies the structure of a foliation spec, returning the
/// resulting manifold spec as JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_construct_from_foliation_json(json: *const c_char, out: *mut *mut c_char) -> RpStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match FoliationSpecFile::from_json(text).and_then(|f| pipeline::construct(&f)) {
            Ok(spec) => write_string(out, spec.to_json()),
            Err(e) => from_error(e),
        }
    })
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn rp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an out-pointer. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn rp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
