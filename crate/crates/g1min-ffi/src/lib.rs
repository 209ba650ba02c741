//! C ABI bindings: opaque equation handles, integer status codes, and
//! JSON strings for structured results. The committed header lives at
//! include/g1min.h; keep the two in sync.
//!
//! Ownership rules: every `*_new`/`*_parse`/output handle is released with
//! `g1min_equation_free`; every `char *` produced here is released with
//! `g1min_string_free`. Passing a null required pointer returns
//! `G1MIN_ERR_BAD_ARGUMENT` and never touches the outputs.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use g1min::fiber;
use g1min::invariants::invariants;
use g1min::jacobian::{self, JacobianError};
use g1min::minimise::{self, MinimiseError, MinimiseOpts};
use g1min::modelfile::{ModelFile, ModelFileError};
use g1min::models::GenusOneEquation;
use g1min::rat::LocalContext;
use g1min::report;
use serde_json::json;

pub const G1MIN_OK: i32 = 0;
pub const G1MIN_ERR_BAD_ARGUMENT: i32 = 1;
pub const G1MIN_ERR_PARSE: i32 = 2;
pub const G1MIN_ERR_SINGULAR: i32 = 3;
pub const G1MIN_ERR_NOT_INTEGRAL: i32 = 4;
pub const G1MIN_ERR_UNSUPPORTED: i32 = 5;
pub const G1MIN_ERR_UNDECIDED: i32 = 6;

/// Opaque equation handle.
pub struct G1minEquation(GenusOneEquation);

fn fiber_code(e: &fiber::FiberError) -> i32 {
    match e {
        fiber::FiberError::SingularGenericFiber => G1MIN_ERR_SINGULAR,
        fiber::FiberError::NotIntegral(_) => G1MIN_ERR_NOT_INTEGRAL,
        fiber::FiberError::UnsupportedResidueField(..)
        | fiber::FiberError::PrimeBoundExceeded { .. } => G1MIN_ERR_UNDECIDED,
        _ => G1MIN_ERR_UNSUPPORTED,
    }
}

fn jacobian_code(e: &JacobianError) -> i32 {
    match e {
        JacobianError::SingularInput => G1MIN_ERR_SINGULAR,
        JacobianError::NotIntegral(_) => G1MIN_ERR_NOT_INTEGRAL,
        _ => G1MIN_ERR_UNSUPPORTED,
    }
}

fn minimise_code(e: &MinimiseError) -> i32 {
    match e {
        MinimiseError::SingularInput => G1MIN_ERR_SINGULAR,
        MinimiseError::NotIntegral(_) => G1MIN_ERR_NOT_INTEGRAL,
        MinimiseError::Jacobian(j) => jacobian_code(j),
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string.
unsafe fn cstr<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

fn emit_string(out: *mut *mut c_char, s: String) -> i32 {
    let Ok(c) = CString::new(s) else {
        return G1MIN_ERR_UNSUPPORTED;
    };
    unsafe { *out = c.into_raw() };
    G1MIN_OK
}

fn context(prime: u64) -> Result<LocalContext, i32> {
    if prime > fiber::prime_bound() {
        return Err(G1MIN_ERR_UNDECIDED);
    }
    LocalContext::new(prime).map_err(|_| G1MIN_ERR_BAD_ARGUMENT)
}

/// Parse a model-file JSON document into an equation handle.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn g1min_equation_parse(
    json: *const c_char,
    out: *mut *mut G1minEquation,
) -> i32 {
    if out.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let Some(text) = cstr(json) else {
        return G1MIN_ERR_BAD_ARGUMENT;
    };
    let parsed: Result<ModelFile, _> = serde_json::from_str(text);
    let Ok(mf) = parsed else {
        return G1MIN_ERR_PARSE;
    };
    match mf.to_equation() {
        Ok(phi) => {
            *out = Box::into_raw(Box::new(G1minEquation(phi)));
            G1MIN_OK
        }
        Err(ModelFileError::BadCoefficient { .. }) => G1MIN_ERR_PARSE,
        Err(_) => G1MIN_ERR_BAD_ARGUMENT,
    }
}

/// Serialize the handle back to model-file JSON.
///
/// # Safety
/// `eq` must be a live handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_equation_to_json(
    eq: *const G1minEquation,
    out: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    emit_string(out, ModelFile::from_equation(&(*eq).0).to_json())
}

/// # Safety
/// `eq` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn g1min_equation_free(eq: *mut G1minEquation) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn g1min_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// c4, c6 and delta as a JSON object of exact rational strings.
///
/// # Safety
/// `eq` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_invariants(
    eq: *const G1minEquation,
    out: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let Ok(inv) = invariants(&(*eq).0) else {
        return G1MIN_ERR_UNSUPPORTED;
    };
    let payload = json!({
        "c4": g1min::rat::rat_string(&inv.c4),
        "c6": g1min::rat::rat_string(&inv.c6),
        "delta": g1min::rat::rat_string(&inv.delta),
    });
    emit_string(out, payload.to_string())
}

/// Special-fiber class (and standard position when one exists) at `prime`.
///
/// # Safety
/// `eq` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_classify_fiber(
    eq: *const G1minEquation,
    prime: u64,
    out: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let ctx = match context(prime) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match fiber::classify_fiber(&(*eq).0, &ctx) {
        Ok((class, pos)) => {
            let payload = json!({
                "prime": prime,
                "class": class.name(),
                "standard_position": pos.as_ref().map(report::position_value),
            });
            emit_string(out, payload.to_string())
        }
        Err(e) => fiber_code(&e),
    }
}

/// Normality verdict at `prime` as JSON.
///
/// # Safety
/// `eq` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_normality(
    eq: *const G1minEquation,
    prime: u64,
    out: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let ctx = match context(prime) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match fiber::normality(&(*eq).0, &ctx) {
        Ok(v) => emit_string(out, report::verdict_value(&v).to_string()),
        Err(e) => fiber_code(&e),
    }
}

/// Level at `prime`; writes the value through `out_level`.
///
/// # Safety
/// `eq` must be a live handle; `out_level` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_level(
    eq: *const G1minEquation,
    prime: u64,
    out_level: *mut u64,
) -> i32 {
    if eq.is_null() || out_level.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let ctx = match context(prime) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match jacobian::level(&(*eq).0, &ctx) {
        Ok(l) => {
            *out_level = l.value;
            G1MIN_OK
        }
        Err(e) => jacobian_code(&e),
    }
}

/// Decide minimality at `prime`: writes 1 (minimal), 0 (not minimal) or
/// -1 (undecided) through `out_minimal`.
///
/// # Safety
/// `eq` must be a live handle; `out_minimal` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_is_minimal(
    eq: *const G1minEquation,
    prime: u64,
    out_minimal: *mut i32,
) -> i32 {
    if eq.is_null() || out_minimal.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let ctx = match context(prime) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match minimise::is_minimal(&(*eq).0, &ctx) {
        Ok((_, cert)) => {
            *out_minimal = match cert.minimality {
                minimise::Minimality::Minimal => 1,
                minimise::Minimality::NotMinimal => 0,
                minimise::Minimality::Unknown => -1,
            };
            G1MIN_OK
        }
        Err(e) => minimise_code(&e),
    }
}

unsafe fn minimise_common(
    r: Result<minimise::MinimisationCertificate, MinimiseError>,
    out_min: *mut *mut G1minEquation,
    out_cert: *mut *mut c_char,
) -> i32 {
    match r {
        Ok(cert) => {
            let code = emit_string(out_cert, report::cert_value(&cert).to_string());
            if code != G1MIN_OK {
                return code;
            }
            *out_min = Box::into_raw(Box::new(G1minEquation(cert.result.clone())));
            G1MIN_OK
        }
        Err(e) => minimise_code(&e),
    }
}

/// Minimise at one prime. On success `out_min` holds a new handle for the
/// minimised equation and `out_cert` the full certificate as JSON.
/// `depth` bounds the guided search; 0 means the default.
///
/// # Safety
/// `eq` must be a live handle; `out_min` and `out_cert` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_minimise_local(
    eq: *const G1minEquation,
    prime: u64,
    depth: usize,
    out_min: *mut *mut G1minEquation,
    out_cert: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out_min.is_null() || out_cert.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let ctx = match context(prime) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let opts = MinimiseOpts {
        depth: if depth == 0 {
            MinimiseOpts::default().depth
        } else {
            depth
        },
    };
    minimise_common(minimise::minimise_local(&(*eq).0, &ctx, &opts), out_min, out_cert)
}

/// Minimise at every prime at once; outputs as for the local variant.
///
/// # Safety
/// `eq` must be a live handle; `out_min` and `out_cert` must be valid.
#[no_mangle]
pub unsafe extern "C" fn g1min_minimise_global(
    eq: *const G1minEquation,
    depth: usize,
    out_min: *mut *mut G1minEquation,
    out_cert: *mut *mut c_char,
) -> i32 {
    if eq.is_null() || out_min.is_null() || out_cert.is_null() {
        return G1MIN_ERR_BAD_ARGUMENT;
    }
    let opts = MinimiseOpts {
        depth: if depth == 0 {
            MinimiseOpts::default().depth
        } else {
            depth
        },
    };
    minimise_common(minimise::minimise_global(&(*eq).0, &opts), out_min, out_cert)
}

/// Static description of a status code; never needs freeing.
#[no_mangle]
pub extern "C" fn g1min_status_message(code: i32) -> *const c_char {
    let s: &'static [u8] = match code {
        G1MIN_OK => b"ok\0",
        G1MIN_ERR_BAD_ARGUMENT => b"bad argument\0",
        G1MIN_ERR_PARSE => b"parse error\0",
        G1MIN_ERR_SINGULAR => b"singular input (delta = 0)\0",
        G1MIN_ERR_NOT_INTEGRAL => b"equation is not integral\0",
        G1MIN_ERR_UNSUPPORTED => b"unsupported input\0",
        G1MIN_ERR_UNDECIDED => b"undecided within bounds\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn parse(text: &str) -> *mut G1minEquation {
        let c = CString::new(text).unwrap();
        let mut eq = ptr::null_mut();
        assert_eq!(g1min_equation_parse(c.as_ptr(), &mut eq), G1MIN_OK);
        eq
    }

    #[test]
    fn parse_invariants_minimise_roundtrip() {
        unsafe {
            let eq = parse(r#"{"degree":1,"coeffs":["0","0","0","0","1"]}"#);
            let mut s = ptr::null_mut();
            assert_eq!(g1min_invariants(eq, &mut s), G1MIN_OK);
            let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
            assert!(text.contains("-432"));
            g1min_string_free(s);

            let mut min = ptr::null_mut();
            let mut cert = ptr::null_mut();
            assert_eq!(g1min_minimise_local(eq, 5, 0, &mut min, &mut cert), G1MIN_OK);
            let cert_text = CStr::from_ptr(cert).to_str().unwrap().to_owned();
            assert!(cert_text.contains("minimal-certified"));
            let mut out = ptr::null_mut();
            assert_eq!(g1min_equation_to_json(min, &mut out), G1MIN_OK);
            g1min_string_free(out);
            g1min_string_free(cert);
            g1min_equation_free(min);
            g1min_equation_free(eq);
        }
    }

    #[test]
    fn error_codes() {
        unsafe {
            let mut eq = ptr::null_mut();
            let bad = CString::new("{not json").unwrap();
            assert_eq!(g1min_equation_parse(bad.as_ptr(), &mut eq), G1MIN_ERR_PARSE);
            assert_eq!(
                g1min_equation_parse(ptr::null(), &mut eq),
                G1MIN_ERR_BAD_ARGUMENT
            );

            // Singular model.
            let eq = parse(r#"{"degree":1,"coeffs":["0","0","0","0","0"]}"#);
            let mut min = ptr::null_mut();
            let mut cert = ptr::null_mut();
            assert_eq!(
                g1min_minimise_local(eq, 5, 0, &mut min, &mut cert),
                G1MIN_ERR_SINGULAR
            );
            let mut lvl = 0u64;
            assert_eq!(g1min_level(eq, 4, &mut lvl), G1MIN_ERR_BAD_ARGUMENT);
            g1min_equation_free(eq);

            let msg = CStr::from_ptr(g1min_status_message(G1MIN_ERR_SINGULAR));
            assert!(msg.to_str().unwrap().contains("singular"));
        }
    }

    #[test]
    fn level_and_classify() {
        unsafe {
            // Degree-3 model with a planted level at 5.
            let eq = parse(
                r#"{"degree":3,"coeffs":["-25","0","-25","0","0","0","1","-25","0","0"]}"#,
            );
            let mut lvl = 0u64;
            assert_eq!(g1min_level(eq, 5, &mut lvl), G1MIN_OK);
            assert_eq!(lvl, 1);
            let mut s = ptr::null_mut();
            assert_eq!(g1min_classify_fiber(eq, 5, &mut s), G1MIN_OK);
            let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
            assert!(text.contains("class"));
            g1min_string_free(s);
            g1min_equation_free(eq);
        }
    }
}
