use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rdwlab::Error;

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateGeometry = 3,
    FitDegenerate = 4,
    ThresholdUndefined = 5,
    NotConverged = 6,
    CiUnreliable = 7,
    ZeroMarginal = 8,
    /// The requested value does not exist yet (for example t1 before full attention).
    NotAvailable = 9,
    Panic = 99,
}

impl From<&Error> for RdwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DegenerateGeometry(_) => RdwStatus::DegenerateGeometry,
            Error::FitDegenerate(_) => RdwStatus::FitDegenerate,
            Error::ThresholdUndefined(_) => RdwStatus::ThresholdUndefined,
            Error::NotConverged => RdwStatus::NotConverged,
            Error::CiUnreliable { .. } => RdwStatus::CiUnreliable,
            Error::ZeroMarginal => RdwStatus::ZeroMarginal,
            _ => RdwStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

pub(crate) fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Internal failure carrying its status.
pub(crate) struct Failure(pub RdwStatus, pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(RdwStatus::from(&e), e.to_string())
    }
}

pub(crate) fn null(name: &str) -> Failure {
    Failure(RdwStatus::NullPointer, format!("`{name}` is null"))
}

/// Runs `f`, converting errors and panics into a status and recording the message.
pub(crate) fn guard<F>(f: F) -> RdwStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RdwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside rdwlab");
            RdwStatus::Panic
        }
    }
}

/// Writes `value` through `out`, failing on a null pointer.
pub(crate) unsafe fn write_out<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    // SAFETY: non-null, caller guarantees it points to writable storage for a T.
    unsafe { out.write(value) };
    Ok(())
}

pub(crate) unsafe fn read_in<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller guarantees a non-null `ptr` points to a valid T.
    unsafe { ptr.as_ref() }.ok_or_else(|| null(name))
}

/// Message of the last failed call on this thread, or null if it succeeded.
///
/// The pointer stays valid until the next `rdw_` call on the same thread.
#[no_mangle]
pub extern "C" fn rdw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library (for example from `rdw_fit_to_json`).
#[no_mangle]
pub unsafe extern "C" fn rdw_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

pub(crate) fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}
