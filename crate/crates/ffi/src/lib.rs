//! C ABI for `ordgram`.
//!
//! Grammars live behind an opaque handle. Every call returns an
//! [`OrdgramStatus`]; on failure a description is available from
//! [`ordgram_last_error`] on the same thread. Strings handed out by this
//! library must be released with [`ordgram_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ordgram::normalize::to_normal_form;
use ordgram::solver::{order_type_with, Limits};
use ordgram::{Error, Grammar, Ordinal};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdgramStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    OrdinalParseError = 4,
    NotAnOrdinalGrammar = 5,
    LeftRecursion = 6,
    BudgetExceeded = 7,
    /// Any other error reported by the library.
    Failed = 8,
    Panic = 9,
}

/// Resource limits for [`ordgram_order_type`]. Zero fields take the default.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OrdgramLimits {
    pub step_budget: usize,
    pub depth_cap: usize,
    pub substitution_budget: usize,
}

/// A parsed grammar.
pub struct OrdgramGrammar {
    inner: Grammar,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrdgramStatus {
    match e.class() {
        "ParseError" => OrdgramStatus::ParseError,
        "OrdinalParseError" => OrdgramStatus::OrdinalParseError,
        "NotAnOrdinalGrammar" | "ShapeViolation" => OrdgramStatus::NotAnOrdinalGrammar,
        "LeftRecursionDetected" => OrdgramStatus::LeftRecursion,
        "BudgetExceeded" => OrdgramStatus::BudgetExceeded,
        _ => OrdgramStatus::Failed,
    }
}

fn fail(e: Error) -> OrdgramStatus {
    let s = status_of(&e);
    set_error(format!("{}: {e}", e.class()));
    s
}

/// Clears the error slot, runs `f`, and maps panics to a status.
fn guard(f: impl FnOnce() -> OrdgramStatus) -> OrdgramStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic".into());
        OrdgramStatus::Panic
    })
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, OrdgramStatus> {
    if p.is_null() {
        set_error("null argument".into());
        return Err(OrdgramStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        OrdgramStatus::InvalidUtf8
    })
}

fn null_arg() -> OrdgramStatus {
    set_error("null argument".into());
    OrdgramStatus::NullArgument
}

fn give_string(s: String, out: *mut *mut c_char) -> OrdgramStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null before producing a result.
            unsafe { *out = c.into_raw() };
            OrdgramStatus::Ok
        }
        Err(_) => {
            set_error("result contains a NUL byte".into());
            OrdgramStatus::Failed
        }
    }
}

/// Parses grammar text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ordgram_grammar_parse(
    text: *const c_char,
    out: *mut *mut OrdgramGrammar,
) -> OrdgramStatus {
    guard(|| {
        if out.is_null() {
            return null_arg();
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Grammar::parse(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(OrdgramGrammar { inner: g }));
                OrdgramStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from [`ordgram_grammar_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ordgram_grammar_free(g: *mut OrdgramGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Computes the order type and stores its Cantor normal form text in
/// `*out`. `limits` may be null.
///
/// # Safety
/// `g` must be a live handle, `limits` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ordgram_order_type(
    g: *const OrdgramGrammar,
    limits: *const OrdgramLimits,
    out: *mut *mut c_char,
) -> OrdgramStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return null_arg();
        }
        *out = ptr::null_mut();
        let mut l = Limits::default();
        if let Some(given) = limits.as_ref() {
            if given.step_budget > 0 {
                l.step_budget = given.step_budget;
            }
            if given.depth_cap > 0 {
                l.depth_cap = given.depth_cap;
            }
            if given.substitution_budget > 0 {
                l.substitution_budget = given.substitution_budget;
            }
        }
        match order_type_with(&(*g).inner, l) {
            Ok(o) => give_string(o.to_text(), out),
            Err(e) => fail(e),
        }
    })
}

/// Stores the normal form of the grammar, in grammar file syntax, in `*out`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ordgram_normalize(
    g: *const OrdgramGrammar,
    out: *mut *mut c_char,
) -> OrdgramStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return null_arg();
        }
        *out = ptr::null_mut();
        let g = &(*g).inner;
        match to_normal_form(g, Limits::default().substitution_budget) {
            Ok(n) => give_string(n.to_grammar(g).to_text(), out),
            Err(e) => fail(e),
        }
    })
}

/// Sets `*out` to 1 when both grammars have the same order type, else 0.
///
/// # Safety
/// `a` and `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ordgram_isomorphic(
    a: *const OrdgramGrammar,
    b: *const OrdgramGrammar,
    out: *mut c_int,
) -> OrdgramStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            return null_arg();
        }
        match ordgram::solver::isomorphic(&(*a).inner, &(*b).inner) {
            Ok(same) => {
                *out = same as c_int;
                OrdgramStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Compares two ordinals in text syntax, setting `*out` to -1, 0 or 1.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ordgram_ordinal_cmp(
    a: *const c_char,
    b: *const c_char,
    out: *mut c_int,
) -> OrdgramStatus {
    guard(|| {
        if out.is_null() {
            return null_arg();
        }
        let (a, b) = match (read_str(a), read_str(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match (Ordinal::parse_text(a), Ordinal::parse_text(b)) {
            (Ok(x), Ok(y)) => {
                *out = x.cmp(&y) as c_int;
                OrdgramStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(e),
        }
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ordgram_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ordgram_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
