//! C ABI over the engine.
//!
//! Handles are opaque and owned by the caller once returned; free them
//! with the matching `*_free` function. Strings returned by the library are
//! NUL-terminated UTF-8 and must be released with [`twcx_string_free`].
//! Every entry point returns a [`TwcxStatus`]; on failure the message is
//! available from [`twcx_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twcx::bundle::Bundle;
use twcx::generate::{generate, GenerateParams};
use twcx::linalg::BaseRing;
use twcx::report::VerificationReport;
use twcx::verify::{ho_invert_bundle, phi_bundle, sole_homotopy, validate_bundle};
use twcx::Error;

/// Result codes. Values are stable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwcxStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The bundle text could not be parsed or resolved.
    Parse = 3,
    /// Inputs do not fit together (shapes, names, degrees).
    Structural = 4,
    /// The computation needs data beyond the truncation level.
    Truncation = 5,
    /// An internal self-check or mathematical precondition failed.
    Math = 6,
    Io = 7,
    /// The library panicked; this is a bug.
    Panic = 8,
}

/// A parsed instance bundle.
pub struct TwcxBundle {
    inner: Bundle,
}

/// A verification report.
pub struct TwcxReport {
    inner: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TwcxStatus {
    match e {
        Error::Parse { .. } => TwcxStatus::Parse,
        Error::Structural(_) => TwcxStatus::Structural,
        Error::Truncation(_) => TwcxStatus::Truncation,
        Error::Io(_) => TwcxStatus::Io,
        Error::InvariantViolation(_) | Error::NotInvertible(_) | Error::Convention(_) | Error::Verification(_) => {
            TwcxStatus::Math
        }
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TwcxStatus, String)>) -> TwcxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TwcxStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TwcxStatus::Panic
        }
    }
}

fn engine<T>(r: twcx::Result<T>) -> Result<T, (TwcxStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (TwcxStatus, String)> {
    if s.is_null() {
        return Err((TwcxStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (TwcxStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn check_out<T>(out: *mut *mut T) -> Result<(), (TwcxStatus, String)> {
    if out.is_null() {
        Err((TwcxStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Parses a bundle from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_bundle_parse(json: *const c_char, out: *mut *mut TwcxBundle) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json, "json")?;
        let inner = engine(Bundle::parse(text))?;
        *out = Box::into_raw(Box::new(TwcxBundle { inner }));
        Ok(())
    })
}

/// Reads and parses a bundle file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_bundle_load(path: *const c_char, out: *mut *mut TwcxBundle) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let path = read_str(path, "path")?;
        let inner = engine(Bundle::read(std::path::Path::new(path)))?;
        *out = Box::into_raw(Box::new(TwcxBundle { inner }));
        Ok(())
    })
}

/// Canonical JSON of a bundle.
///
/// # Safety
/// `bundle` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_bundle_to_json(bundle: *const TwcxBundle, out: *mut *mut c_char) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let b = bundle
            .as_ref()
            .ok_or((TwcxStatus::NullArgument, "bundle is null".into()))?;
        *out = to_c(b.inner.to_json());
        Ok(())
    })
}

/// # Safety
/// `bundle` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn twcx_bundle_free(bundle: *mut TwcxBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

unsafe fn report_into(
    out: *mut *mut TwcxReport,
    f: impl FnOnce() -> Result<VerificationReport, (TwcxStatus, String)>,
) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let inner = f()?;
        *out = Box::into_raw(Box::new(TwcxReport { inner }));
        Ok(())
    })
}

/// Runs every validator on the bundle.
///
/// # Safety
/// `bundle` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_validate(bundle: *const TwcxBundle, out: *mut *mut TwcxReport) -> TwcxStatus {
    report_into(out, || {
        let b = bundle
            .as_ref()
            .ok_or((TwcxStatus::NullArgument, "bundle is null".into()))?;
        engine(validate_bundle(&b.inner))
    })
}

/// Builds the transformation induced by a homotopy and verifies it on a
/// probe. `homotopy` may be null when the bundle has exactly one.
///
/// # Safety
/// Pointers must be valid as documented; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_phi(
    bundle: *const TwcxBundle,
    homotopy: *const c_char,
    probe: *const c_char,
    max_level: usize,
    out: *mut *mut TwcxReport,
) -> TwcxStatus {
    report_into(out, || {
        let b = bundle
            .as_ref()
            .ok_or((TwcxStatus::NullArgument, "bundle is null".into()))?;
        let probe = read_str(probe, "probe")?;
        let name = if homotopy.is_null() {
            engine(sole_homotopy(&b.inner))?.to_string()
        } else {
            read_str(homotopy, "homotopy")?.to_string()
        };
        Ok(engine(phi_bundle(&b.inner, &name, probe, max_level))?.0)
    })
}

/// Searches for a homotopy inverse of a named closed degree-0 morphism.
///
/// # Safety
/// Pointers must be valid as documented; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_ho_invert(
    bundle: *const TwcxBundle,
    morphism: *const c_char,
    out: *mut *mut TwcxReport,
) -> TwcxStatus {
    report_into(out, || {
        let b = bundle
            .as_ref()
            .ok_or((TwcxStatus::NullArgument, "bundle is null".into()))?;
        let name = read_str(morphism, "morphism")?;
        Ok(engine(ho_invert_bundle(&b.inner, name))?.0)
    })
}

/// `1` if every check passed, `0` if not, `-1` for a null handle.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn twcx_report_passed(report: *const TwcxReport) -> c_int {
    match report.as_ref() {
        Some(r) => c_int::from(r.inner.passed),
        None => -1,
    }
}

/// The report as JSON.
///
/// # Safety
/// `report` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_report_json(report: *const TwcxReport, out: *mut *mut c_char) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let r = report
            .as_ref()
            .ok_or((TwcxStatus::NullArgument, "report is null".into()))?;
        *out = to_c(r.inner.to_json());
        Ok(())
    })
}

/// # Safety
/// `report` must be null or come from this library, and not be used again.
#[no_mangle]
pub unsafe extern "C" fn twcx_report_free(report: *mut TwcxReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Generates a seeded bundle with default sizes. `modulus` is `0` for the
/// rationals or a prime for GF(p). Writes canonical JSON to `out`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn twcx_generate(seed: u64, modulus: u64, out: *mut *mut c_char) -> TwcxStatus {
    guard(|| {
        check_out(out)?;
        let ring = if modulus == 0 {
            BaseRing::Rationals
        } else {
            engine(BaseRing::prime_field(modulus))?
        };
        let params = GenerateParams {
            ring,
            ..GenerateParams::default()
        };
        let g = engine(generate(seed, &params))?;
        *out = to_c(g.bundle.to_json());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn twcx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn twcx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn twcx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
