//! C ABI over `nsd_core`.
//!
//! Every handle is opaque and owned by the caller until passed to its
//! `_free` function. Fallible calls return an [`NsdStatus`]; on failure the
//! message is available from [`nsd_last_error_message`] on the same thread.
//! Strings handed out by the library must be released with
//! [`nsd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nsd_core::ultrapower::{DigraphFamily, Ultrapower};
use nsd_core::{ErrorClass, FilterOracle, HyperNat, IndexSet, SetOp};
use serde_json::json;

/// Status codes. The first four match the exit codes of the `nsd` tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsdStatus {
    Ok = 0,
    Parse = 2,
    Validation = 3,
    Unsupported = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NsdSetOp {
    Union = 0,
    Intersect = 1,
    Complement = 2,
    Difference = 3,
}

/// A digraph family `⟨D_n⟩`.
pub struct NsdFamily(DigraphFamily);

/// An ultimately periodic subset of ℕ.
pub struct NsdIndexSet(IndexSet);

/// A quasi-polynomial hypernatural.
pub struct NsdHyperNat(HyperNat);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: NsdStatus,
    message: String,
}

impl Failure {
    fn new(status: NsdStatus, message: impl Into<String>) -> Failure {
        Failure { status, message: message.into() }
    }
}

impl From<nsd_core::Error> for Failure {
    fn from(e: nsd_core::Error) -> Failure {
        let status = match e.class() {
            ErrorClass::Parse => NsdStatus::Parse,
            ErrorClass::Validation => NsdStatus::Validation,
            ErrorClass::Unsupported => NsdStatus::Unsupported,
        };
        Failure::new(status, format!("{}: {e}", e.kind()))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::new(NsdStatus::Parse, e.to_string())
    }
}

fn set_last_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NsdStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let text = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure::new(NsdStatus::Panic, text))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            NsdStatus::Ok
        }
        Err(f) => {
            set_last_error(Some(f.message));
            f.status
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(NsdStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(NsdStatus::InvalidUtf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(NsdStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(NsdStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure::new(NsdStatus::Validation, e.to_string()))
}

fn ultrapower(f: &NsdFamily, tower: u64) -> Ultrapower {
    Ultrapower::new(f.0.clone(), FilterOracle::new(tower))
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn nsd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a family spec such as `{"kind":"builtin","name":"dipath"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_family_from_json(json: *const c_char, out: *mut *mut NsdFamily) -> NsdStatus {
    guard(|| {
        let family = DigraphFamily::from_json(text(json)?)?;
        put(out, Box::into_raw(Box::new(NsdFamily(family))))
    })
}

/// # Safety
/// `f` must be null or a handle from [`nsd_family_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsd_family_free(f: *mut NsdFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Connectedness grade of `*D` under the oracle for `tower`, written as a
/// newly allocated string (`strong`, `strictly_unilateral`, ...).
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_family_classify(f: *const NsdFamily, tower: u64, out: *mut *mut c_char) -> NsdStatus {
    guard(|| {
        let up = ultrapower(get(f)?, tower);
        let grade = serde_json::to_value(up.ns_classify_family().grade)?;
        put(out, c_string(grade.as_str().unwrap_or_default().to_string())?)
    })
}

/// Arc-count bounds for a hyperfinite family, as a JSON object with
/// `category`, `inequality`, `p`, `q`, `witness` and `holds`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_family_check_bounds_json(f: *const NsdFamily, tower: u64, out: *mut *mut c_char) -> NsdStatus {
    guard(|| {
        let b = ultrapower(get(f)?, tower).check_bounds()?;
        let report = json!({
            "category": b.category.name(),
            "inequality": b.category.inequality(),
            "p": b.p,
            "q": b.q,
            "witness": b.bound.witness,
            "holds": b.holds,
        });
        put(out, c_string(report.to_string())?)
    })
}

/// Parses an index set such as `{"prefix":"01","period":2,"residues":[0]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_from_json(json: *const c_char, out: *mut *mut NsdIndexSet) -> NsdStatus {
    guard(|| {
        let s: IndexSet = serde_json::from_str(text(json)?)?;
        put(out, Box::into_raw(Box::new(NsdIndexSet(s))))
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_free(s: *mut NsdIndexSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_contains(s: *const NsdIndexSet, n: u64, out: *mut bool) -> NsdStatus {
    guard(|| put(out, get(s)?.0.contains(n)))
}

/// Whether the set belongs to the ultrafilter fixed by `tower`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_decide(s: *const NsdIndexSet, tower: u64, out: *mut bool) -> NsdStatus {
    guard(|| put(out, FilterOracle::new(tower).decide(&get(s)?.0)))
}

/// Applies a Boolean operation. `b` is ignored for complement and may be
/// null there.
///
/// # Safety
/// `a` (and `b` for binary operations) must be live handles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_op(
    op: NsdSetOp,
    a: *const NsdIndexSet,
    b: *const NsdIndexSet,
    out: *mut *mut NsdIndexSet,
) -> NsdStatus {
    guard(|| {
        let op = match op {
            NsdSetOp::Union => SetOp::Union,
            NsdSetOp::Intersect => SetOp::Intersect,
            NsdSetOp::Complement => SetOp::Complement,
            NsdSetOp::Difference => SetOp::Difference,
        };
        let a = &get(a)?.0;
        let b = if op.arity() == 2 { Some(&get(b)?.0) } else { None };
        let s = IndexSet::apply(op, a, b)?;
        put(out, Box::into_raw(Box::new(NsdIndexSet(s))))
    })
}

/// Canonical JSON form of the set.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_index_set_to_json(s: *const NsdIndexSet, out: *mut *mut c_char) -> NsdStatus {
    guard(|| put(out, c_string(serde_json::to_string(&get(s)?.0)?)?))
}

/// Parses a hypernatural such as `{"prefix":[1],"period":2,"polys":[[3],[0,1]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_hypernat_from_json(json: *const c_char, out: *mut *mut NsdHyperNat) -> NsdStatus {
    guard(|| {
        let h: HyperNat = serde_json::from_str(text(json)?)?;
        put(out, Box::into_raw(Box::new(NsdHyperNat(h))))
    })
}

/// # Safety
/// `h` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nsd_hypernat_free(h: *mut NsdHyperNat) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Value at index `n`; fails with `NSD_STATUS_VALIDATION` beyond `u64`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_hypernat_eval(h: *const NsdHyperNat, n: u64, out: *mut u64) -> NsdStatus {
    guard(|| {
        let v = get(h)?.0.eval(n);
        let v = u64::try_from(v).map_err(|_| Failure::new(NsdStatus::Validation, format!("value {v} exceeds u64")))?;
        put(out, v)
    })
}

/// Standard part under the oracle for `tower`. `limited` is set to false for
/// an unlimited hypernatural, in which case `out` is left untouched.
///
/// # Safety
/// `h` must be a live handle; `limited` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nsd_hypernat_limit(h: *const NsdHyperNat, tower: u64, limited: *mut bool, out: *mut u64) -> NsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::new(NsdStatus::NullPointer, "null output pointer"));
        }
        match get(h)?.0.limit(&FilterOracle::new(tower)) {
            Some(k) => {
                put(limited, true)?;
                put(out, k)
            }
            None => put(limited, false),
        }
    })
}
