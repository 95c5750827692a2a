//! C ABI over the gentle-derived library.
//!
//! Algebras and words are opaque handles created by `*_parse` functions and
//! released with the matching `*_free`. A word handle stores arrow indices of
//! the algebra it was parsed against and must only be used with that algebra.
//! Every fallible call returns a [`GentleStatus`]; the message of the last
//! failure on the calling thread is available from [`gentle_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gentle_derived::field::FieldChoice;
use gentle_derived::hom::{analyze_words, basis_json, hom_dim};
use gentle_derived::oracle::oracle_hom_dim_words;
use gentle_derived::quiver::{discrete_algebra, parse_algebra, GentleAlgebra};
use gentle_derived::words::{parse_word, Word};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GentleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque algebra handle.
pub struct GentleAlgebraHandle {
    inner: GentleAlgebra,
}

/// Opaque word handle.
pub struct GentleWord {
    inner: Word,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn guard(f: impl FnOnce() -> GentleStatus) -> GentleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            GentleStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GentleStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(GentleStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(e);
        GentleStatus::InvalidUtf8
    })
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return GentleStatus::NullPointer;
        }
    };
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gentle_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse an algebra from the bound-quiver text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gentle_algebra_parse(text: *const c_char, out: *mut *mut GentleAlgebraHandle) -> GentleStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(text));
        match parse_algebra(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GentleAlgebraHandle { inner }));
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Parse
            }
        }
    })
}

/// Build the discrete derived algebra with parameters `r`, `n`, `m`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gentle_algebra_discrete(r: usize, n: usize, m: usize, out: *mut *mut GentleAlgebraHandle) -> GentleStatus {
    guard(|| {
        non_null!(out);
        match discrete_algebra(r, n, m) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GentleAlgebraHandle { inner }));
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Domain
            }
        }
    })
}

/// Release an algebra handle. Null is ignored.
///
/// # Safety
/// `alg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gentle_algebra_free(alg: *mut GentleAlgebraHandle) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Number of arrows lying on cycles with full relations.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gentle_algebra_cycle_arrows(alg: *const GentleAlgebraHandle, out: *mut usize) -> GentleStatus {
    guard(|| {
        non_null!(alg, out);
        *out = (*alg).inner.cycle_arrows().len();
        GentleStatus::Ok
    })
}

/// Parse a word literal against an algebra.
///
/// # Safety
/// Pointers must be valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gentle_word_parse(
    alg: *const GentleAlgebraHandle,
    text: *const c_char,
    out: *mut *mut GentleWord,
) -> GentleStatus {
    guard(|| {
        non_null!(alg, out);
        let text = try_status!(read_str(text));
        match parse_word(&(*alg).inner, text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GentleWord { inner }));
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Parse
            }
        }
    })
}

/// Release a word handle. Null is ignored.
///
/// # Safety
/// `w` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gentle_word_free(w: *mut GentleWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Dimension of morphisms from `v` to `w`, computed combinatorially.
///
/// # Safety
/// Pointers must be valid and the words parsed against `alg`.
#[no_mangle]
pub unsafe extern "C" fn gentle_hom_dim(
    alg: *const GentleAlgebraHandle,
    v: *const GentleWord,
    w: *const GentleWord,
    out: *mut usize,
) -> GentleStatus {
    guard(|| {
        non_null!(alg, v, w, out);
        match hom_dim(&(*alg).inner, &(*v).inner, &(*w).inner) {
            Ok(d) => {
                *out = d;
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Domain
            }
        }
    })
}

/// Dimension of morphisms from `v` to `w` by linear algebra over GF(`prime`),
/// or over the rationals when `prime` is 0.
///
/// # Safety
/// Pointers must be valid and the words parsed against `alg`.
#[no_mangle]
pub unsafe extern "C" fn gentle_oracle_hom_dim(
    alg: *const GentleAlgebraHandle,
    v: *const GentleWord,
    w: *const GentleWord,
    prime: u64,
    out: *mut usize,
) -> GentleStatus {
    guard(|| {
        non_null!(alg, v, w, out);
        let field = if prime == 0 { FieldChoice::Rational } else { FieldChoice::Prime(prime) };
        match oracle_hom_dim_words(&(*alg).inner, &(*v).inner, &(*w).inner, field) {
            Ok(d) => {
                *out = d;
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Domain
            }
        }
    })
}

/// Canonical basis from `v` to `w` as a JSON document. Release the string
/// with [`gentle_string_free`].
///
/// # Safety
/// Pointers must be valid and the words parsed against `alg`.
#[no_mangle]
pub unsafe extern "C" fn gentle_basis_json(
    alg: *const GentleAlgebraHandle,
    v: *const GentleWord,
    w: *const GentleWord,
    out: *mut *mut c_char,
) -> GentleStatus {
    guard(|| {
        non_null!(alg, v, w, out);
        let alg = &(*alg).inner;
        match analyze_words(alg, &(*v).inner, &(*w).inner) {
            Ok((p, an)) => {
                let text = basis_json(alg, &p, &an.theta).to_string();
                *out = CString::new(text).expect("json has no NUL").into_raw();
                GentleStatus::Ok
            }
            Err(e) => {
                set_error(e);
                GentleStatus::Domain
            }
        }
    })
}

/// Canonical key of a word, for isomorphism tests. Release with
/// [`gentle_string_free`].
///
/// # Safety
/// Pointers must be valid and the word parsed against `alg`.
#[no_mangle]
pub unsafe extern "C" fn gentle_word_canonical_key(
    alg: *const GentleAlgebraHandle,
    w: *const GentleWord,
    out: *mut *mut c_char,
) -> GentleStatus {
    guard(|| {
        non_null!(alg, w, out);
        let key = (*w).inner.canonical_key(&(*alg).inner);
        *out = CString::new(key).expect("keys have no NUL").into_raw();
        GentleStatus::Ok
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gentle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
