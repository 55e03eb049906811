//! C interface to `sosk49`.
//!
//! Orders and elements are opaque heap handles released with their `_free`
//! functions. Strings returned by the library are released with
//! [`sosk49_string_free`]. Every fallible call returns a [`Sosk49Status`];
//! on failure the message is available from [`sosk49_last_error_message`]
//! on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sosk49::classify::classify;
use sosk49::dyadic::local_report;
use sosk49::report::{classification_json, length_json, local_json};
use sosk49::sos::{length, LengthValue};
use sosk49::text::parse_element;
use sosk49::{CubicOrderSpec, Element, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sosk49Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidOrder = 4,
    Arithmetic = 5,
    Unsupported = 6,
    Violation = 7,
    Failed = 8,
    Panic = 9,
}

/// Opaque handle to a cubic order.
pub struct Sosk49Order(CubicOrderSpec);

/// Opaque handle to an element of an order.
pub struct Sosk49Element(Element);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Sosk49Status {
    match e {
        Error::Parse { .. } => Sosk49Status::Parse,
        Error::NotTotallyReal(_) | Error::Reducible(_) | Error::TraceFormNotPositiveDefinite => Sosk49Status::InvalidOrder,
        Error::MixedOrders | Error::DivisionByZero | Error::NotDivisible => Sosk49Status::Arithmetic,
        Error::UnsupportedOrder(_) | Error::NotInert => Sosk49Status::Unsupported,
        Error::TheoremViolation(_) | Error::InvalidWitness(_) | Error::InconsistentEquivalence(_) | Error::KyRepresentationMissing(_) => {
            Sosk49Status::Violation
        }
        _ => Sosk49Status::Failed,
    }
}

fn fail(e: Error) -> Sosk49Status {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> Sosk49Status {
    set_error(format!("null pointer: {what}"));
    Sosk49Status::NullPointer
}

/// Runs `f`, turning a panic into [`Sosk49Status::Panic`].
fn guard(f: impl FnOnce() -> Sosk49Status) -> Sosk49Status {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        Sosk49Status::Panic
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library strings contain no nul bytes").into_raw()
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Sosk49Status {
    if out.is_null() {
        return null("output");
    }
    out.write(value);
    Sosk49Status::Ok
}

unsafe fn element_ref<'a>(e: *const Sosk49Element) -> Option<&'a Element> {
    e.as_ref().map(|h| &h.0)
}

fn boxed(e: Element) -> *mut Sosk49Element {
    Box::into_raw(Box::new(Sosk49Element(e)))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sosk49_status_message(status: Sosk49Status) -> *const c_char {
    let s: &'static CStr = match status {
        Sosk49Status::Ok => c"ok",
        Sosk49Status::NullPointer => c"null pointer argument",
        Sosk49Status::InvalidUtf8 => c"string is not valid UTF-8",
        Sosk49Status::Parse => c"parse error",
        Sosk49Status::InvalidOrder => c"invalid defining polynomial",
        Sosk49Status::Arithmetic => c"arithmetic error",
        Sosk49Status::Unsupported => c"unsupported order",
        Sosk49Status::Violation => c"theorem violation",
        Sosk49Status::Failed => c"operation failed",
        Sosk49Status::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn sosk49_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sosk49_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Order defined by `x³ + p·x² + q·x + r`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_order_new(p: i64, q: i64, r: i64, out: *mut *mut Sosk49Order) -> Sosk49Status {
    guard(|| match CubicOrderSpec::new(p, q, r) {
        Ok(o) => write_out(out, Box::into_raw(Box::new(Sosk49Order(o)))),
        Err(e) => fail(e),
    })
}

/// The order `Z[ρ]`, `ρ³ + ρ² − 2ρ − 1 = 0`.
#[no_mangle]
pub extern "C" fn sosk49_order_k49() -> *mut Sosk49Order {
    Box::into_raw(Box::new(Sosk49Order(CubicOrderSpec::k49())))
}

/// # Safety
/// `order` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sosk49_order_free(order: *mut Sosk49Order) {
    if !order.is_null() {
        drop(Box::from_raw(order));
    }
}

/// Parses `a + b*r + c*r^2` or `[a, b, c]`.
///
/// # Safety
/// `order` must be a live handle, `text` a nul-terminated string and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_parse(
    order: *const Sosk49Order,
    text: *const c_char,
    out: *mut *mut Sosk49Element,
) -> Sosk49Status {
    guard(|| {
        let Some(order) = order.as_ref() else { return null("order") };
        if text.is_null() {
            return null("text");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("element text is not valid UTF-8");
            return Sosk49Status::InvalidUtf8;
        };
        match parse_element(&order.0, text) {
            Ok(e) => write_out(out, boxed(e)),
            Err(e) => fail(e),
        }
    })
}

/// `a + b·θ + c·θ²`, or null when `order` is null.
///
/// # Safety
/// `order` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_from_coords(order: *const Sosk49Order, a: i64, b: i64, c: i64) -> *mut Sosk49Element {
    match order.as_ref() {
        Some(o) => boxed(o.0.element(a, b, c)),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `e` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_free(e: *mut Sosk49Element) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Text form `a + b*r + c*r^2`; free with [`sosk49_string_free`]. Null when
/// `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_to_string(e: *const Sosk49Element) -> *mut c_char {
    element_ref(e).map_or(ptr::null_mut(), |e| into_c_string(e.to_string()))
}

unsafe fn binary(
    a: *const Sosk49Element,
    b: *const Sosk49Element,
    out: *mut *mut Sosk49Element,
    op: fn(&Element, &Element) -> sosk49::Result<Element>,
) -> Sosk49Status {
    guard(|| {
        let (Some(a), Some(b)) = (element_ref(a), element_ref(b)) else { return null("operand") };
        match op(a, b) {
            Ok(e) => write_out(out, boxed(e)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `a`, `b` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_add(
    a: *const Sosk49Element,
    b: *const Sosk49Element,
    out: *mut *mut Sosk49Element,
) -> Sosk49Status {
    binary(a, b, out, Element::try_add)
}

/// # Safety
/// `a`, `b` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_mul(
    a: *const Sosk49Element,
    b: *const Sosk49Element,
    out: *mut *mut Sosk49Element,
) -> Sosk49Status {
    binary(a, b, out, Element::try_mul)
}

/// # Safety
/// `e` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_is_totally_positive(e: *const Sosk49Element, out: *mut bool) -> Sosk49Status {
    guard(|| match element_ref(e) {
        Some(e) => write_out(out, e.is_totally_positive()),
        None => null("element"),
    })
}

/// Decimal norm; free with [`sosk49_string_free`]. Null when `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_norm(e: *const Sosk49Element) -> *mut c_char {
    element_ref(e).map_or(ptr::null_mut(), |e| into_c_string(e.norm().to_string()))
}

/// Decimal trace; free with [`sosk49_string_free`]. Null when `e` is null.
///
/// # Safety
/// `e` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sosk49_element_trace(e: *const Sosk49Element) -> *mut c_char {
    element_ref(e).map_or(ptr::null_mut(), |e| into_c_string(e.trace().to_string()))
}

/// Length of `e`; writes -1 when `e` is not a sum of squares and -2 when no
/// decomposition was found up to the length cap.
///
/// # Safety
/// `e` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_length(e: *const Sosk49Element, out: *mut i32) -> Sosk49Status {
    guard(|| {
        let Some(e) = element_ref(e) else { return null("element") };
        match length(e) {
            Ok(r) => {
                let n = match r.value {
                    LengthValue::Finite(n) => n as i32,
                    LengthValue::NotASumOfSquares => -1,
                    LengthValue::NotFoundUpToCap(_) => -2,
                };
                write_out(out, n)
            }
            Err(err) => fail(err),
        }
    })
}

unsafe fn json_call(e: *const Sosk49Element, out: *mut *mut c_char, f: fn(&Element) -> sosk49::Result<String>) -> Sosk49Status {
    guard(|| {
        let Some(e) = element_ref(e) else { return null("element") };
        match f(e) {
            Ok(s) => write_out(out, into_c_string(s)),
            Err(err) => fail(err),
        }
    })
}

/// Length document `{"target":..,"length":..,"witness":..,"certificate":..}`.
///
/// # Safety
/// `e` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_length_json(e: *const Sosk49Element, out: *mut *mut c_char) -> Sosk49Status {
    json_call(e, out, |e| Ok(length_json(&length(e)?).to_string()))
}

/// Classification of a totally positive element as JSON.
///
/// # Safety
/// `e` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_classify_json(e: *const Sosk49Element, out: *mut *mut c_char) -> Sosk49Status {
    json_call(e, out, |e| Ok(classification_json(&classify(e)?).to_string()))
}

/// Dyadic data `{"v2":..,"isSquare":..,"isMinusSquare":..,"representsI3":..}`.
///
/// # Safety
/// `e` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sosk49_local_json(e: *const Sosk49Element, out: *mut *mut c_char) -> Sosk49Status {
    json_call(e, out, |e| Ok(local_json(&local_report(e)?).to_string()))
}
