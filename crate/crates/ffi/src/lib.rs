//! C ABI for `widecat`.
//!
//! Groups and complexes cross the boundary as opaque handles created by
//! `*_from_json` and released with the matching `*_free`. Everything else is
//! exchanged as NUL-terminated UTF-8 JSON in the formats used by the
//! command-line tool. Returned strings are owned by the caller and must be
//! released with `wc_string_free`.
//!
//! Every function returns a `WcStatus`. On failure the outputs are left
//! untouched and `wc_last_error_message` describes the error; the message
//! is per thread and stays valid until the next call on that thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::Value;
use widecat::complexes::{self, homology_all};
use widecat::formats;
use widecat::ktheory::{class_of_complex, class_of_module};
use widecat::spectra::ks_decompose;
use widecat::zmodules::{self, direct_sum, ext1, hom, p_length};
use widecat::{smith_normal_form, Error, FgAbGroup, PerfectComplex, Prime, SpectrumModel, ThickSupport};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum WcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    InputError = 3,
    DomainError = 4,
    ResourceError = 5,
    VerificationFailed = 6,
    InternalError = 7,
}

/// A finitely generated abelian group.
pub struct WcGroup(FgAbGroup);

/// A perfect complex of free abelian groups.
pub struct WcComplex(PerfectComplex);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

enum Failure {
    Null(&'static str),
    BadString(&'static str),
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            WcStatus::Ok
        }
        Ok(Err(failure)) => {
            let (status, msg) = match failure {
                Failure::Null(arg) => (WcStatus::NullPointer, format!("{arg} is null")),
                Failure::BadString(arg) => (WcStatus::InvalidString, format!("{arg} is not valid UTF-8")),
                Failure::Lib(e) => {
                    let status = match e {
                        Error::Input(_) => WcStatus::InputError,
                        Error::Domain(_) => WcStatus::DomainError,
                        Error::Resource(_) => WcStatus::ResourceError,
                    };
                    (status, e.to_string())
                }
                Failure::Verify(msg) => (WcStatus::VerificationFailed, msg),
            };
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: unexpected panic".into());
            WcStatus::InternalError
        }
    }
}

unsafe fn string<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::BadString(name))
}

unsafe fn optional_string<'a>(p: *const c_char, name: &'static str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        string(p, name).map(Some)
    }
}

unsafe fn json(p: *const c_char, name: &'static str) -> Result<Value, Failure> {
    let s = string(p, name)?;
    serde_json::from_str(s).map_err(|e| Failure::Lib(Error::Input(format!("{name}: malformed JSON: {e}"))))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    let s = CString::new(v.to_string()).expect("JSON text has no NUL bytes");
    out.write(s.into_raw());
    Ok(())
}

unsafe fn write_group(out: *mut *mut WcGroup, g: FgAbGroup) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(Box::into_raw(Box::new(WcGroup(g))));
    Ok(())
}

fn z_support(arg: Option<&str>, default: impl FnOnce() -> ThickSupport) -> Result<ThickSupport, Failure> {
    match arg {
        Some(s) => Ok(formats::parse_support_arg(s, &SpectrumModel::ZSpec)?),
        None => Ok(default()),
    }
}

/// Message for the last failed call on this thread; empty after a success.
#[no_mangle]
pub extern "C" fn wc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Smith normal form of a JSON matrix (`[[...], ...]` or `{"matrix": ...}`),
/// written as `{"U", "D", "V", "diagonal"}`.
///
/// # Safety
/// `matrix_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_snf_json(matrix_json: *const c_char, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let a = formats::parse_matrix_file(&json(matrix_json, "matrix_json")?)?;
        write_json(out, &formats::snf_to_json(&smith_normal_form(&a)))
    })
}

/// Builds a group from a presentation `{"generators", "relations"}` or a
/// canonical form `{"rank", "invariant_factors"}`.
///
/// # Safety
/// `group_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_from_json(group_json: *const c_char, out: *mut *mut WcGroup) -> WcStatus {
    guard(|| {
        let v = json(group_json, "group_json")?;
        let g = if v.get("generators").is_some() {
            formats::parse_module(&v)?
        } else {
            formats::group_from_json(&v)?
        };
        write_group(out, g)
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wc_group_free(g: *mut WcGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical form `{"rank", "invariant_factors"}`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_to_json(g: *const WcGroup, out: *mut *mut c_char) -> WcStatus {
    guard(|| write_json(out, &formats::group_to_json(&handle(g, "g")?.0)))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_free_rank(g: *const WcGroup, out: *mut usize) -> WcStatus {
    guard(|| write(out, handle(g, "g")?.0.free_rank()))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_direct_sum(a: *const WcGroup, b: *const WcGroup, out: *mut *mut WcGroup) -> WcStatus {
    guard(|| write_group(out, direct_sum(&handle(a, "a")?.0, &handle(b, "b")?.0)))
}

/// `Hom(a, b)`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_hom(a: *const WcGroup, b: *const WcGroup, out: *mut *mut WcGroup) -> WcStatus {
    guard(|| write_group(out, hom(&handle(a, "a")?.0, &handle(b, "b")?.0)))
}

/// `Ext^1(a, b)`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_ext1(a: *const WcGroup, b: *const WcGroup, out: *mut *mut WcGroup) -> WcStatus {
    guard(|| write_group(out, ext1(&handle(a, "a")?.0, &handle(b, "b")?.0)))
}

/// Length at the prime `p`; a domain error for groups of positive rank.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_p_length(g: *const WcGroup, p: u64, out: *mut u64) -> WcStatus {
    guard(|| {
        let p = Prime::new(p)?;
        write(out, p_length(&handle(g, "g")?.0, &p)?)
    })
}

/// Support as `"full"` or a list of primes.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_support_json(g: *const WcGroup, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let s = zmodules::support(&handle(g, "g")?.0);
        write_json(out, &formats::support_to_json(&s, &SpectrumModel::ZSpec))
    })
}

/// Grothendieck class on `support` (`"full"` or `"2,3,..."`; null means the
/// group's own support), as `{"support", "coords"}`.
///
/// # Safety
/// `g` must be a live handle; `support` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wc_group_k0_json(g: *const WcGroup, support: *const c_char, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let m = &handle(g, "g")?.0;
        let s = z_support(optional_string(support, "support")?, || zmodules::support(m))?;
        write_json(out, &formats::class_to_json(&class_of_module(m, &s)?))
    })
}

/// Builds a complex from `{"bottom_degree", "ranks", "differentials"}`.
///
/// # Safety
/// `complex_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_from_json(complex_json: *const c_char, out: *mut *mut WcComplex) -> WcStatus {
    guard(|| {
        let x = formats::parse_complex(&json(complex_json, "complex_json")?)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        out.write(Box::into_raw(Box::new(WcComplex(x))));
        Ok(())
    })
}

/// # Safety
/// `x` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_free(x: *mut WcComplex) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Nonzero homology groups keyed by degree.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_homology_json(x: *const WcComplex, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let h: serde_json::Map<String, Value> = homology_all(&handle(x, "x")?.0)
            .iter()
            .map(|(n, g)| (n.to_string(), formats::group_to_json(g)))
            .collect();
        write_json(out, &Value::Object(h))
    })
}

/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_support_json(x: *const WcComplex, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let s = complexes::support(&handle(x, "x")?.0);
        write_json(out, &formats::support_to_json(&s, &SpectrumModel::ZSpec))
    })
}

/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_euler_characteristic(x: *const WcComplex, out: *mut i64) -> WcStatus {
    guard(|| write(out, handle(x, "x")?.0.euler_characteristic()))
}

/// Grothendieck class on `support`; null means the complex's own support.
///
/// # Safety
/// `x` must be a live handle; `support` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wc_complex_k0_json(x: *const WcComplex, support: *const c_char, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let x = &handle(x, "x")?.0;
        let s = z_support(optional_string(support, "support")?, || complexes::support(x))?;
        write_json(out, &formats::class_to_json(&class_of_complex(x, &s)?))
    })
}

/// Krull-Schmidt parts of a thick support. With `poset_json` null the
/// spectrum is that of the integers and `support` is required; otherwise
/// `support` lists point names and defaults to the whole poset.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_spec_decompose_json(
    poset_json: *const c_char,
    support: *const c_char,
    out: *mut *mut c_char,
) -> WcStatus {
    guard(|| {
        let model = if poset_json.is_null() {
            SpectrumModel::ZSpec
        } else {
            SpectrumModel::FinPoset(formats::parse_poset(&json(poset_json, "poset_json")?)?)
        };
        let a = match (optional_string(support, "support")?, &model) {
            (Some(s), _) => formats::parse_support_arg(s, &model)?,
            (None, SpectrumModel::FinPoset(p)) => ThickSupport::UpSet(p.all()),
            (None, SpectrumModel::ZSpec) => return Err(Failure::Null("support")),
        };
        let parts: Vec<Value> = ks_decompose(&model, &a)?
            .parts
            .iter()
            .map(|p| formats::support_to_json(p, &model))
            .collect();
        write_json(out, &Value::Array(parts))
    })
}

/// Runs a verification suite and writes its report. Returns
/// `VERIFICATION_FAILED` (with the report still written) when any trial fails.
///
/// # Safety
/// `suite` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wc_verify_json(suite: *const c_char, trials: u64, seed: u64, out: *mut *mut c_char) -> WcStatus {
    guard(|| {
        let report = widecat::verify::run_suite(string(suite, "suite")?, trials, seed)?;
        let v = serde_json::to_value(&report).expect("reports serialize");
        write_json(out, &v)?;
        if report.passed() {
            Ok(())
        } else {
            Err(Failure::Verify(format!("{} of {} trials failed", report.failures, report.trials)))
        }
    })
}
