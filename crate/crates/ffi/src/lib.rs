//! C ABI for the matlen library.
//!
//! Conventions:
//! - Every function returns a [`MatlenStatus`]; results travel through out
//!   pointers. `MATLEN_STATUS_OK` (0) means success.
//! - A generating system is an opaque handle created from a row-major,
//!   interleaved `(re, im)` buffer and released with
//!   [`matlen_system_free`].
//! - Length-type results use `int64_t`: a nonnegative value is the length,
//!   `-1` encodes "not generating" (a successful computation, not an error).
//! - On any non-OK status, [`matlen_last_error_message`] returns a
//!   thread-local, NUL-terminated description valid until the next call on
//!   the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use num_complex::Complex64;

use matlen::channels::{full_kraus_rank_index, KrausChannel};
use matlen::liespan::{lie_length, LieGeneratingSystem, LieLengthValue, SuElement};
use matlen::numkernel::{CMatrix, Tolerance};
use matlen::wordspan::{length, wie_length, GeneratingSystem, LengthValue};
use matlen::Error;

/// Status codes returned by every matlen FFI function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatlenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    EigenFailure = 5,
    CapExceeded = 6,
    BudgetExceeded = 7,
    Overflow = 8,
    Inconsistent = 9,
    Io = 10,
    Parse = 11,
}

/// Opaque handle to a tuple of n×n complex matrices.
pub struct MatlenSystem {
    sys: GeneratingSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> MatlenStatus {
    match err {
        Error::DimensionMismatch(_) => MatlenStatus::DimensionMismatch,
        Error::InvalidArgument(_) => MatlenStatus::InvalidArgument,
        Error::NonFinite(_) => MatlenStatus::NonFinite,
        Error::EigenConvergence(_) => MatlenStatus::EigenFailure,
        Error::CapExceeded { .. } => MatlenStatus::CapExceeded,
        Error::BudgetExceeded(_) => MatlenStatus::BudgetExceeded,
        Error::Overflow(_) => MatlenStatus::Overflow,
        Error::Inconsistent(_) => MatlenStatus::Inconsistent,
        Error::Io { .. } => MatlenStatus::Io,
        Error::Parse { .. } => MatlenStatus::Parse,
    }
}

fn fail(err: Error) -> MatlenStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Message describing the most recent error on this thread; empty string if
/// none. The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn matlen_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a system of `g` matrices of size `n`×`n` from `entries`:
/// `2·g·n·n` doubles, matrix after matrix, each row-major with interleaved
/// real and imaginary parts. On success writes the handle to `out`.
///
/// # Safety
/// `entries` must point to `2·g·n·n` readable doubles and `out` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn matlen_system_new(
    n: usize,
    g: usize,
    entries: *const f64,
    out: *mut *mut MatlenSystem,
) -> MatlenStatus {
    if entries.is_null() || out.is_null() {
        set_error("null pointer argument");
        return MatlenStatus::NullPointer;
    }
    if n == 0 || g == 0 {
        set_error("n and g must be positive");
        return MatlenStatus::InvalidArgument;
    }
    let buf = std::slice::from_raw_parts(entries, 2 * g * n * n);
    let mut mats = Vec::with_capacity(g);
    for m in 0..g {
        let base = m * 2 * n * n;
        let data: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new(buf[base + 2 * k], buf[base + 2 * k + 1]))
            .collect();
        match CMatrix::new(n, n, data) {
            Ok(mat) => mats.push(mat),
            Err(e) => return fail(e),
        }
    }
    match GeneratingSystem::new(mats) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(MatlenSystem { sys }));
            MatlenStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a handle created by [`matlen_system_new`]. NULL is a no-op.
///
/// # Safety
/// `sys` must be NULL or a pointer obtained from [`matlen_system_new`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn matlen_system_free(sys: *mut MatlenSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

unsafe fn with_system<F>(sys: *const MatlenSystem, out: *mut i64, f: F) -> MatlenStatus
where
    F: FnOnce(&GeneratingSystem) -> matlen::Result<i64>,
{
    if sys.is_null() || out.is_null() {
        set_error("null pointer argument");
        return MatlenStatus::NullPointer;
    }
    match f(&(*sys).sys) {
        Ok(v) => {
            *out = v;
            MatlenStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn encode(v: LengthValue) -> i64 {
    match v {
        LengthValue::Finite(k) => k as i64,
        LengthValue::NotGenerating => -1,
    }
}

/// Wie-length of the system: minimal k with the length-k words spanning
/// M_n(C); `-1` if the system does not Wie-generate.
///
/// # Safety
/// `sys` must be a live handle and `out` a writable `int64_t` slot.
#[no_mangle]
pub unsafe extern "C" fn matlen_wie_length(
    sys: *const MatlenSystem,
    out: *mut i64,
) -> MatlenStatus {
    with_system(sys, out, |s| {
        Ok(encode(wie_length(s, None, &Tolerance::default())?.value))
    })
}

/// Length of the system (identity allowed as a letter); `-1` if the system
/// does not generate.
///
/// # Safety
/// `sys` must be a live handle and `out` a writable `int64_t` slot.
#[no_mangle]
pub unsafe extern "C" fn matlen_length(
    sys: *const MatlenSystem,
    out: *mut i64,
) -> MatlenStatus {
    with_system(sys, out, |s| {
        Ok(encode(length(s, &Tolerance::default())?.value))
    })
}

/// Lie-length of the system, whose matrices must be traceless
/// skew-Hermitian; `-1` if the system does not Lie-generate su(n).
///
/// # Safety
/// `sys` must be a live handle and `out` a writable `int64_t` slot.
#[no_mangle]
pub unsafe extern "C" fn matlen_lie_length(
    sys: *const MatlenSystem,
    out: *mut i64,
) -> MatlenStatus {
    with_system(sys, out, |s| {
        let elems = s
            .mats()
            .iter()
            .cloned()
            .map(SuElement::new)
            .collect::<matlen::Result<Vec<_>>>()?;
        let rep = lie_length(&LieGeneratingSystem::new(elems)?, None, &Tolerance::default())?;
        Ok(match rep.value {
            LieLengthValue::Finite(k) => k as i64,
            LieLengthValue::NotGenerating => -1,
        })
    })
}

/// Index of eventual full Kraus rank of the channel whose Kraus operators
/// are the system's matrices (they must be trace preserving); `-1` if the
/// channel is not primitive.
///
/// # Safety
/// `sys` must be a live handle and `out` a writable `int64_t` slot.
#[no_mangle]
pub unsafe extern "C" fn matlen_channel_index(
    sys: *const MatlenSystem,
    out: *mut i64,
) -> MatlenStatus {
    with_system(sys, out, |s| {
        let e = KrausChannel::new(s.mats().to_vec())?;
        Ok(encode(full_kraus_rank_index(&e, &Tolerance::default())?.value))
    })
}
