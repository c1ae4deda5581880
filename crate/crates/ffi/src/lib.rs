//! C ABI for the igci library.
//!
//! Every fallible function returns an [`IgciStatus`] and writes its result
//! through an out-pointer only on success. After a failure,
//! [`igci_last_error_message`] describes the error on the calling thread.
//! Pairs are passed around as opaque [`IgciPair`] handles owned by the caller
//! and released with [`igci_pair_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use igci::io::align_lag;
use igci::{Direction, Error, EstimatorKind, ReferenceFamily, SamplePair};

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgciStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or an enum value was unknown.
    InvalidArgument = 2,
    /// The data cannot be scored: too short, non-finite, constant, all tied.
    DataError = 3,
    /// A numerical routine failed.
    NumericError = 4,
    /// An unexpected internal error; the library state is still valid.
    Panic = 5,
}

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgciReference {
    /// Rescale each variable to `[0, 1]`.
    Uniform = 0,
    /// Standardize each variable to zero mean and unit variance.
    Gaussian = 1,
}

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgciEstimator {
    Entropy = 0,
    Slope = 1,
}

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgciDirection {
    Undecided = 0,
    XToY = 1,
    YToX = -1,
}

/// Result of [`igci_score`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgciReport {
    /// Negative values favour X causing Y.
    pub c_xy: f64,
    pub c_yx: f64,
    pub direction: IgciDirection,
    pub estimator: IgciEstimator,
    pub reference: IgciReference,
    pub m_used: usize,
}

/// Result of [`igci_align_lag`]. `a[t]` pairs with `b[t + lag]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgciLagAlignment {
    pub lag: i64,
    pub correlation: f64,
    pub overlap_length: usize,
}

/// Opaque handle to a validated pair of equal-length finite samples.
pub struct IgciPair(SamplePair);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> IgciStatus {
    match e {
        Error::InvalidParameter(_) | Error::InvalidReference(_) => IgciStatus::InvalidArgument,
        Error::SingularCovariance
        | Error::NotPositiveDefinite
        | Error::SingularFit(_)
        | Error::NonPositiveTrace(_)
        | Error::SamplingStalled(_)
        | Error::Domain(_) => IgciStatus::NumericError,
        _ => IgciStatus::DataError,
    }
}

struct Fail(IgciStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> IgciStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => IgciStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            IgciStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(IgciStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn input<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

fn out_ptr<T>(ptr: *mut T, what: &str) -> Result<(), Fail> {
    if ptr.is_null() {
        Err(null(what))
    } else {
        Ok(())
    }
}

fn reference_from(raw: i32) -> Result<ReferenceFamily, Fail> {
    match raw {
        0 => Ok(ReferenceFamily::UniformUnit),
        1 => Ok(ReferenceFamily::Gaussian),
        _ => Err(Fail(
            IgciStatus::InvalidArgument,
            format!("unknown reference {raw}"),
        )),
    }
}

fn estimator_from(raw: i32) -> Result<EstimatorKind, Fail> {
    match raw {
        0 => Ok(EstimatorKind::EntropySpacing),
        1 => Ok(EstimatorKind::SlopeIntegral),
        _ => Err(Fail(
            IgciStatus::InvalidArgument,
            format!("unknown estimator {raw}"),
        )),
    }
}

/// Copies `len` values from each of `x` and `y` into a new pair handle.
///
/// # Safety
/// `x` and `y` must each point to `len` readable doubles; `out` must be
/// writable. The handle written to `out` must be released with
/// [`igci_pair_free`].
#[no_mangle]
pub unsafe extern "C" fn igci_pair_new(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut *mut IgciPair,
) -> IgciStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let x = input(x, len, "x")?.to_vec();
        let y = input(y, len, "y")?.to_vec();
        let pair = SamplePair::new(x, y)?;
        *out = Box::into_raw(Box::new(IgciPair(pair)));
        Ok(())
    })
}

/// Number of observations in `pair`, or 0 for a null handle.
///
/// # Safety
/// `pair` must be null or a live handle from [`igci_pair_new`].
#[no_mangle]
pub unsafe extern "C" fn igci_pair_len(pair: *const IgciPair) -> usize {
    pair.as_ref().map_or(0, |p| p.0.len())
}

/// Releases a pair handle. Null is ignored.
///
/// # Safety
/// `pair` must be null or a handle from [`igci_pair_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn igci_pair_free(pair: *mut IgciPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Scores `pair`. `reference` takes an [`IgciReference`] value and
/// `estimator` an [`IgciEstimator`] value.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn igci_score(
    pair: *const IgciPair,
    reference: i32,
    estimator: i32,
    out: *mut IgciReport,
) -> IgciStatus {
    guard(|| {
        let pair = pair.as_ref().ok_or_else(|| null("pair"))?;
        out_ptr(out, "out")?;
        let r = igci::igci_score(
            &pair.0,
            reference_from(reference)?,
            estimator_from(estimator)?,
        )?;
        *out = IgciReport {
            c_xy: r.c_xy,
            c_yx: r.c_yx,
            direction: match r.direction {
                Direction::XtoY => IgciDirection::XToY,
                Direction::YtoX => IgciDirection::YToX,
                Direction::Undecided => IgciDirection::Undecided,
            },
            estimator: match r.estimator {
                EstimatorKind::EntropySpacing => IgciEstimator::Entropy,
                EstimatorKind::SlopeIntegral => IgciEstimator::Slope,
            },
            reference: match r.reference {
                ReferenceFamily::Gaussian => IgciReference::Gaussian,
                _ => IgciReference::Uniform,
            },
            m_used: r.m_used,
        };
        Ok(())
    })
}

/// Spacing estimate of the differential entropy of `values`, in nats.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn igci_spacing_entropy(
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> IgciStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = igci::spacing_entropy(input(values, len, "values")?)?;
        Ok(())
    })
}

/// Mean log-slope of `y` against `x` after sorting by `x`.
///
/// # Safety
/// `x` and `y` must each point to `len` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn igci_slope_criterion(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> IgciStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = igci::slope_criterion(input(x, len, "x")?, input(y, len, "y")?)?;
        Ok(())
    })
}

/// The digamma function for positive finite `x`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igci_digamma(x: f64, out: *mut f64) -> IgciStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = igci::digamma(x)?;
        Ok(())
    })
}

/// Searches shifts of `b` against `a` up to `max_lag` for the largest correlation.
///
/// # Safety
/// `a` and `b` must point to `a_len` and `b_len` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn igci_align_lag(
    a: *const f64,
    a_len: usize,
    b: *const f64,
    b_len: usize,
    max_lag: usize,
    out: *mut IgciLagAlignment,
) -> IgciStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let r = align_lag(input(a, a_len, "a")?, input(b, b_len, "b")?, max_lag)?;
        *out = IgciLagAlignment {
            lag: r.lag,
            correlation: r.correlation,
            overlap_length: r.overlap_length,
        };
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. The pointer stays valid until the next call into the
/// library from the same thread.
#[no_mangle]
pub extern "C" fn igci_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of an [`IgciStatus`] value; unknown values give "unknown".
#[no_mangle]
pub extern "C" fn igci_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"data error",
        4 => c"numeric error",
        5 => c"internal panic",
        _ => c"unknown",
    };
    s.as_ptr()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn igci_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
