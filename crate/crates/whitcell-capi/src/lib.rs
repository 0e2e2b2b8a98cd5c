//! C ABI over the whitcell library.
//!
//! Handles are opaque pointers; every query returns a status code and, where
//! applicable, a heap-allocated JSON string that the caller releases with
//! `whitcell_string_free`. All computations behind the interface are exact.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use whitcell::cellfam::{descent_class_report, verify_tables};
use whitcell::cli::parse_subset;
use whitcell::error::Error;
use whitcell::rootsys::{build_cartan, CartanDatum, TypeLabel};
use whitcell::whitpoly::{brute_force_chi, scan_speculation, whittaker_json};
use whitcell::weyl;

/// Opaque root-system handle.
pub struct WhitcellDatum {
    datum: CartanDatum,
}

/// Status codes returned by every entry point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhitcellStatus {
    Ok = 0,
    InvalidArgument = 1,
    InvalidRank = 2,
    UnsupportedType = 3,
    RankTooLarge = 4,
    WrongType = 5,
    VerificationFailed = 6,
    BoundExceeded = 7,
    InternalError = 8,
}

fn status_of(err: &Error) -> WhitcellStatus {
    match err {
        Error::InvalidRank { .. } => WhitcellStatus::InvalidRank,
        Error::UnsupportedType(_) => WhitcellStatus::UnsupportedType,
        Error::RankTooLarge { .. } => WhitcellStatus::RankTooLarge,
        Error::WrongType(_) => WhitcellStatus::WrongType,
        Error::BoundExceeded(_) => WhitcellStatus::BoundExceeded,
        Error::IndexOutOfRange { .. } | Error::Parse { .. } | Error::EmptySubset(_) => {
            WhitcellStatus::InvalidArgument
        }
        _ => WhitcellStatus::InternalError,
    }
}

fn emit_string(out: *mut *mut c_char, text: String) -> WhitcellStatus {
    match CString::new(text) {
        Ok(cstr) => {
            unsafe { *out = cstr.into_raw() };
            WhitcellStatus::Ok
        }
        Err(_) => WhitcellStatus::InternalError,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn guarded<F: FnOnce() -> WhitcellStatus>(f: F) -> WhitcellStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(WhitcellStatus::InternalError)
}

/// Builds a root-system handle. `type_label` is one of "A","B","C","D","G2".
///
/// # Safety
/// `type_label` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn whitcell_datum_new(
    type_label: *const c_char,
    rank: u32,
    out: *mut *mut WhitcellDatum,
) -> WhitcellStatus {
    if out.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    let Some(label) = read_str(type_label) else {
        return WhitcellStatus::InvalidArgument;
    };
    guarded(|| {
        let parsed = match TypeLabel::parse(label) {
            Ok(t) => t,
            Err(e) => return status_of(&e),
        };
        match build_cartan(parsed, rank as usize) {
            Ok(datum) => {
                let boxed = Box::new(WhitcellDatum { datum });
                unsafe { *out = Box::into_raw(boxed) };
                WhitcellStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle created by `whitcell_datum_new`.
///
/// # Safety
/// `datum` must come from `whitcell_datum_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn whitcell_datum_free(datum: *mut WhitcellDatum) {
    if !datum.is_null() {
        drop(unsafe { Box::from_raw(datum) });
    }
}

/// Serializes the root-system data as JSON.
///
/// # Safety
/// `datum` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn whitcell_datum_json(
    datum: *const WhitcellDatum,
    out_json: *mut *mut c_char,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_json.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| emit_string(out_json, handle.datum.to_json().to_string()))
}

/// Whittaker polynomial for the subset specifier (same syntax as the CLI):
/// JSON with exact coefficients, splitting flag and rational roots.
///
/// # Safety
/// Pointer arguments as for `whitcell_datum_json`; `subset` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn whitcell_whittaker_json(
    datum: *const WhitcellDatum,
    subset: *const c_char,
    out_json: *mut *mut c_char,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    let Some(spec) = read_str(subset) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_json.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| {
        let s = match parse_subset(spec, handle.datum.rank) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        match whittaker_json(&handle.datum, &s) {
            Ok(json) => emit_string(out_json, serde_json::to_string(&json).unwrap()),
            Err(e) => status_of(&e),
        }
    })
}

/// Descent-class report (phi, a-values, special orbits) as JSON.
///
/// # Safety
/// As for `whitcell_whittaker_json`.
#[no_mangle]
pub unsafe extern "C" fn whitcell_report_json(
    datum: *const WhitcellDatum,
    subset: *const c_char,
    out_json: *mut *mut c_char,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    let Some(spec) = read_str(subset) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_json.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| {
        let s = match parse_subset(spec, handle.datum.rank) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        match descent_class_report(&handle.datum, &s) {
            Ok(report) => emit_string(out_json, report.to_json().to_string()),
            Err(e) => status_of(&e),
        }
    })
}

/// Runs the two-sided-cell table verification; emits the JSON report and
/// returns `VerificationFailed` when any row fails.
///
/// # Safety
/// As for `whitcell_datum_json`.
#[no_mangle]
pub unsafe extern "C" fn whitcell_verify_tables_json(
    datum: *const WhitcellDatum,
    out_json: *mut *mut c_char,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_json.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| match verify_tables(handle.datum.type_label, handle.datum.rank) {
        Ok(v) => {
            let passed = v.passed;
            let status = emit_string(out_json, serde_json::to_string(&v).unwrap());
            if status == WhitcellStatus::Ok && !passed {
                WhitcellStatus::VerificationFailed
            } else {
                status
            }
        }
        Err(e) => status_of(&e),
    })
}

/// Full speculation scan over every subset, as JSON.
///
/// # Safety
/// As for `whitcell_datum_json`.
#[no_mangle]
pub unsafe extern "C" fn whitcell_scan_json(
    datum: *const WhitcellDatum,
    out_json: *mut *mut c_char,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_json.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| match scan_speculation(&handle.datum) {
        Ok(report) => {
            let ok = report.flat_implies_split;
            let status = emit_string(out_json, serde_json::to_string(&report).unwrap());
            if status == WhitcellStatus::Ok && !ok {
                WhitcellStatus::VerificationFailed
            } else {
                status
            }
        }
        Err(e) => status_of(&e),
    })
}

/// Checks the fixed-point formula chi(w) = n^{d(w)} over the whole group;
/// writes 1 to `out_ok` when every element matches.
///
/// # Safety
/// As for `whitcell_datum_json`; `out_ok` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn whitcell_oracle_check(
    datum: *const WhitcellDatum,
    n: u64,
    out_ok: *mut i32,
) -> WhitcellStatus {
    let Some(handle) = (unsafe { datum.as_ref() }) else {
        return WhitcellStatus::InvalidArgument;
    };
    if out_ok.is_null() {
        return WhitcellStatus::InvalidArgument;
    }
    guarded(|| {
        let elements = match weyl::enumerate_group(&handle.datum) {
            Ok(e) => e,
            Err(e) => return status_of(&e),
        };
        for w in &elements {
            match brute_force_chi(&handle.datum, w, n) {
                Ok(got) => {
                    if got != n.pow(weyl::fixed_dim(w) as u32) {
                        unsafe { *out_ok = 0 };
                        return WhitcellStatus::Ok;
                    }
                }
                Err(e) => return status_of(&e),
            }
        }
        unsafe { *out_ok = 1 };
        WhitcellStatus::Ok
    })
}

/// Frees a string returned by any `_json` entry point.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn whitcell_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Static name for a status code.
#[no_mangle]
pub extern "C" fn whitcell_status_name(status: WhitcellStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        WhitcellStatus::Ok => b"ok\0",
        WhitcellStatus::InvalidArgument => b"invalid-argument\0",
        WhitcellStatus::InvalidRank => b"invalid-rank\0",
        WhitcellStatus::UnsupportedType => b"unsupported-type\0",
        WhitcellStatus::RankTooLarge => b"rank-too-large\0",
        WhitcellStatus::WrongType => b"wrong-type\0",
        WhitcellStatus::VerificationFailed => b"verification-failed\0",
        WhitcellStatus::BoundExceeded => b"bound-exceeded\0",
        WhitcellStatus::InternalError => b"internal-error\0",
    };
    name.as_ptr() as *const c_char
}
