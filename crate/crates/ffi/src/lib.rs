//! C ABI over the wpkstab engine. Curves are opaque handles; reports come
//! back as JSON strings that must be released with `wpk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wpkstab::kclass::{classify_at, kss_domain, KVerdict};
use wpkstab::lct::lct_pair;
use wpkstab::vgit::{enumerate_walls, git_classify, FamilyPoint};
use wpkstab::{Error, Rat};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Malformed = 3,
    OutOfDomain = 4,
    EmptyCurve = 5,
    NotWellFormed = 6,
    NotContractedHere = 7,
    Degenerate = 8,
    OtherError = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpkVerdict {
    Unstable = 0,
    StrictlySemistable = 1,
    Polystable = 2,
    Stable = 3,
}

impl From<KVerdict> for WpkVerdict {
    fn from(v: KVerdict) -> WpkVerdict {
        match v {
            KVerdict::Unstable => WpkVerdict::Unstable,
            KVerdict::StrictlySemistable => WpkVerdict::StrictlySemistable,
            KVerdict::Polystable => WpkVerdict::Polystable,
            KVerdict::Stable => WpkVerdict::Stable,
        }
    }
}

/// A curve of the family. Opaque to C.
pub struct WpkPoint(FamilyPoint);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WpkStatus {
    match e {
        Error::Malformed(_) => WpkStatus::Malformed,
        Error::OutOfDomain(_) => WpkStatus::OutOfDomain,
        Error::EmptyCurve => WpkStatus::EmptyCurve,
        Error::NotWellFormed(_) => WpkStatus::NotWellFormed,
        Error::NotContractedHere(_) => WpkStatus::NotContractedHere,
        Error::Degenerate(_) => WpkStatus::Degenerate,
        _ => WpkStatus::OtherError,
    }
}

fn fail(status: WpkStatus, msg: &str) -> WpkStatus {
    set_error(msg);
    status
}

/// Runs `f`, recording any error or panic for `wpk_last_error`.
fn guard(f: impl FnOnce() -> Result<(), WpkStatus>) -> WpkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WpkStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(WpkStatus::Panic, "internal panic"),
    }
}

fn lift(e: Error) -> WpkStatus {
    fail(status_of(&e), &e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, WpkStatus> {
    if s.is_null() {
        return Err(fail(WpkStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(WpkStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn read_point<'a>(p: *const WpkPoint) -> Result<&'a FamilyPoint, WpkStatus> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| fail(WpkStatus::NullPointer, "null point"))
}

unsafe fn read_rat(s: *const c_char) -> Result<Rat, WpkStatus> {
    read_str(s)?.parse::<Rat>().map_err(lift)
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, v: &T) -> Result<(), WpkStatus> {
    if out.is_null() {
        return Err(fail(WpkStatus::NullPointer, "null output pointer"));
    }
    let s = serde_json::to_string(v).map_err(|e| fail(WpkStatus::OtherError, &e.to_string()))?;
    *out = CString::new(s).expect("JSON has no NUL").into_raw();
    Ok(())
}

unsafe fn write_point(out: *mut *mut WpkPoint, p: FamilyPoint) -> Result<(), WpkStatus> {
    if out.is_null() {
        return Err(fail(WpkStatus::NullPointer, "null output pointer"));
    }
    *out = Box::into_raw(Box::new(WpkPoint(p)));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wpk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a point from JSON such as `{"n":3,"a":"-2","ai":["5/2",...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wpk_point_from_json(json: *const c_char, out: *mut *mut WpkPoint) -> WpkStatus {
    guard(|| {
        let s = read_str(json)?;
        let p = FamilyPoint::from_json(s).map_err(lift)?;
        write_point(out, p)
    })
}

/// The maximally degenerate curve of the family for `n`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wpk_point_dss(n: u64, out: *mut *mut WpkPoint) -> WpkStatus {
    guard(|| {
        if n == 0 {
            return Err(lift(Error::Malformed("n must be positive".into())));
        }
        write_point(out, FamilyPoint::dss(n))
    })
}

/// The monomial curve with a_e = 1 and every other coefficient zero.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wpk_point_monomial(n: u64, e: u64, out: *mut *mut WpkPoint) -> WpkStatus {
    guard(|| {
        if n == 0 {
            return Err(lift(Error::Malformed("n must be positive".into())));
        }
        write_point(out, FamilyPoint::monomial(n, e as usize).map_err(lift)?)
    })
}

/// # Safety
/// `p` must come from a `wpk_point_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wpk_point_free(p: *mut WpkPoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wpk_point_to_json(p: *const WpkPoint, out: *mut *mut c_char) -> WpkStatus {
    guard(|| write_json(out, read_point(p)?))
}

/// Wall schedule for `n` as JSON.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wpk_walls_json(n: u64, out: *mut *mut c_char) -> WpkStatus {
    guard(|| write_json(out, &enumerate_walls(n).map_err(lift)?))
}

/// K-stability verdict at weight `w` ("p/q").
///
/// # Safety
/// `p` must be a live handle, `w` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpk_classify(p: *const WpkPoint, w: *const c_char, out: *mut WpkVerdict) -> WpkStatus {
    guard(|| {
        let p = read_point(p)?;
        let w = read_rat(w)?;
        if out.is_null() {
            return Err(fail(WpkStatus::NullPointer, "null output pointer"));
        }
        *out = classify_at(p, &w).map_err(lift)?.into();
        Ok(())
    })
}

/// GIT verdict at weight `w` as JSON.
///
/// # Safety
/// `p` must be a live handle, `w` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpk_git_json(p: *const WpkPoint, w: *const c_char, out: *mut *mut c_char) -> WpkStatus {
    guard(|| {
        let p = read_point(p)?;
        let w = read_rat(w)?;
        write_json(out, &git_classify(p, &w).map_err(lift)?)
    })
}

/// Log canonical threshold report as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpk_lct_json(p: *const WpkPoint, out: *mut *mut c_char) -> WpkStatus {
    guard(|| write_json(out, &lct_pair(read_point(p)?).map_err(lift)?))
}

/// Semistable and polystable weight sets as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wpk_kss_domain_json(p: *const WpkPoint, out: *mut *mut c_char) -> WpkStatus {
    guard(|| write_json(out, &kss_domain(read_point(p)?)))
}

/// Releases a string returned through an `out` parameter.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wpk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
