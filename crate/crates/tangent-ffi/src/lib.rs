//! C ABI for the tangent classification library.
//!
//! Conventions:
//! - Every fallible function returns a [`TangentStatus`]; out-parameters
//!   are written only when the status is `TANGENT_STATUS_OK`.
//! - Curves and reports are opaque handles. Free them with the matching
//!   `*_free` function; freeing NULL is a no-op.
//! - Strings returned through `char **` out-parameters are owned by the
//!   caller and freed with `tangent_string_free`. Strings returned as
//!   `const char *` (version, last error) must not be freed.
//! - On any non-OK status, `tangent_last_error()` returns a thread-local
//!   message that stays valid until the next failing call on the same
//!   thread.
//! - All entry points catch panics and return `TANGENT_STATUS_PANIC`
//!   rather than unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tangent_core::curve::CurveExpr;
use tangent_core::limits::LimitConfig;
use tangent_core::report::MachineRecord;
use tangent_core::tangent::{
    classify, report_for_error, tangent_line, TangentReport as CoreReport, Verdict,
    DEFAULT_COLLINEAR_TOL,
};

/// Result of every fallible C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentStatus {
    /// Success; out-parameters are valid.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The curve literal did not parse.
    InvalidLiteral = 3,
    /// Options or numeric arguments were out of range.
    InvalidConfig = 4,
    /// The requested datum is not present on this report.
    Unavailable = 5,
    /// An internal panic was caught; see tangent_last_error().
    Panic = 6,
}

/// Verdict of a classification, mirroring the report's verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentVerdict {
    Tangent = 0,
    Corner = 1,
    Degenerate = 2,
    Undetermined = 3,
}

/// Limit-estimation options. Obtain defaults from
/// `tangent_options_default()` and adjust fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TangentOptions {
    /// Initial parameter step.
    pub h0: f64,
    /// Step shrink factor per probe, in (0, 1).
    pub rho: f64,
    /// Pairwise angular agreement (radians) required for convergence.
    pub angle_tol: f64,
    /// Number of consecutive estimates that must agree.
    pub window: usize,
    /// Length of the probe schedule per side.
    pub max_steps: usize,
    /// Collinearity tolerance for matching side limits.
    pub collinear_tol: f64,
}

/// Opaque parsed-curve handle.
pub struct TangentCurve {
    inner: CurveExpr,
}

/// Opaque classification-report handle.
pub struct TangentReport {
    inner: CoreReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: TangentStatus, message: &str) -> TangentStatus {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NULs removed");
    });
    status
}

fn guarded<F: FnOnce() -> TangentStatus>(body: F) -> TangentStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = if let Some(s) = payload.downcast_ref::<&str>() {
                s
            } else if let Some(s) = payload.downcast_ref::<String>() {
                s.as_str()
            } else {
                "panic in the tangent library"
            };
            fail(TangentStatus::Panic, message)
        }
    }
}

/// Message describing the most recent failure on this thread. Never
/// NULL; empty before the first failure. Valid until the next failing
/// call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn tangent_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string. Do not free.
#[no_mangle]
pub extern "C" fn tangent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Default estimation options.
#[no_mangle]
pub extern "C" fn tangent_options_default() -> TangentOptions {
    let limits = LimitConfig::default();
    TangentOptions {
        h0: limits.h0,
        rho: limits.rho,
        angle_tol: limits.angle_tol,
        window: limits.window,
        max_steps: limits.max_steps,
        collinear_tol: DEFAULT_COLLINEAR_TOL,
    }
}

/// Parse a curve literal such as `"x=cos(t); y=sin(t)"` or `"f=abs(t)"`.
/// On success the caller owns `*out` and frees it with
/// `tangent_curve_free`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tangent_curve_parse(
    src: *const c_char,
    out: *mut *mut TangentCurve,
) -> TangentStatus {
    guarded(|| {
        if src.is_null() || out.is_null() {
            return fail(TangentStatus::NullArgument, "src and out must not be NULL");
        }
        let text = match unsafe { CStr::from_ptr(src) }.to_str() {
            Ok(text) => text,
            Err(e) => return fail(TangentStatus::InvalidUtf8, &e.to_string()),
        };
        match CurveExpr::parse_literal(text) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(TangentCurve { inner })) };
                TangentStatus::Ok
            }
            Err(e) => fail(TangentStatus::InvalidLiteral, &e.to_string()),
        }
    })
}

/// Free a curve handle. NULL is a no-op.
///
/// # Safety
/// `curve` must be NULL or a pointer from `tangent_curve_parse` that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tangent_curve_free(curve: *mut TangentCurve) {
    if !curve.is_null() {
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Classify the tangent of `curve` at parameter `t0`. `options` may be
/// NULL for defaults. Always produces a report on success — an
/// unevaluable base point yields a Degenerate report, not an error.
/// The caller owns `*out` and frees it with `tangent_report_free`.
///
/// # Safety
/// `curve` must be a live handle; `options` NULL or valid; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tangent_classify(
    curve: *const TangentCurve,
    t0: f64,
    options: *const TangentOptions,
    out: *mut *mut TangentReport,
) -> TangentStatus {
    guarded(|| {
        if curve.is_null() || out.is_null() {
            return fail(
                TangentStatus::NullArgument,
                "curve and out must not be NULL",
            );
        }
        if !t0.is_finite() {
            return fail(TangentStatus::InvalidConfig, "t0 must be finite");
        }
        let opts = if options.is_null() {
            tangent_options_default()
        } else {
            unsafe { *options }
        };
        let limits = LimitConfig {
            h0: opts.h0,
            rho: opts.rho,
            angle_tol: opts.angle_tol,
            window: opts.window,
            max_steps: opts.max_steps,
        };
        if let Err(e) = limits.validate() {
            return fail(TangentStatus::InvalidConfig, &e.to_string());
        }
        if !(opts.collinear_tol.is_finite() && opts.collinear_tol > 0.0) {
            return fail(
                TangentStatus::InvalidConfig,
                "collinear_tol must be positive",
            );
        }
        let curve = unsafe { &(*curve).inner };
        let inner = match classify(curve, t0, &limits, opts.collinear_tol) {
            Ok(report) => report,
            Err(e) => report_for_error(t0, &e),
        };
        unsafe { *out = Box::into_raw(Box::new(TangentReport { inner })) };
        TangentStatus::Ok
    })
}

/// Free a report handle. NULL is a no-op.
///
/// # Safety
/// `report` must be NULL or a pointer from `tangent_classify` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_free(report: *mut TangentReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

unsafe fn with_report<F>(report: *const TangentReport, body: F) -> TangentStatus
where
    F: FnOnce(&CoreReport) -> TangentStatus,
{
    guarded(|| {
        if report.is_null() {
            return fail(TangentStatus::NullArgument, "report must not be NULL");
        }
        body(unsafe { &(*report).inner })
    })
}

/// Verdict of the classification.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_verdict(
    report: *const TangentReport,
    out: *mut TangentVerdict,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out.is_null() {
                return fail(TangentStatus::NullArgument, "out must not be NULL");
            }
            *out = match r.verdict {
                Verdict::Tangent => TangentVerdict::Tangent,
                Verdict::Corner => TangentVerdict::Corner,
                Verdict::Degenerate => TangentVerdict::Degenerate,
                Verdict::Undetermined => TangentVerdict::Undetermined,
            };
            TangentStatus::Ok
        })
    }
}

/// Parameter value the report was computed at.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_t0(
    report: *const TangentReport,
    out: *mut f64,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out.is_null() {
                return fail(TangentStatus::NullArgument, "out must not be NULL");
            }
            *out = r.t0;
            TangentStatus::Ok
        })
    }
}

/// Base point of the classification. `out_xyz` receives three doubles.
/// Unavailable when the base point could not be evaluated.
///
/// # Safety
/// `report` must be a live handle; `out_xyz` must point to three
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_point(
    report: *const TangentReport,
    out_xyz: *mut f64,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out_xyz.is_null() {
                return fail(TangentStatus::NullArgument, "out_xyz must not be NULL");
            }
            if !r.point.is_finite() {
                return fail(TangentStatus::Unavailable, "base point not evaluable");
            }
            let xyz = r.point.to_array();
            std::ptr::copy_nonoverlapping(xyz.as_ptr(), out_xyz, 3);
            TangentStatus::Ok
        })
    }
}

/// Canonical tangent direction. `out_xyz` receives three doubles.
/// Unavailable unless the verdict is Tangent.
///
/// # Safety
/// `report` must be a live handle; `out_xyz` must point to three
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_direction(
    report: *const TangentReport,
    out_xyz: *mut f64,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out_xyz.is_null() {
                return fail(TangentStatus::NullArgument, "out_xyz must not be NULL");
            }
            match r.direction {
                Some(direction) => {
                    let xyz = direction.to_array();
                    std::ptr::copy_nonoverlapping(xyz.as_ptr(), out_xyz, 3);
                    TangentStatus::Ok
                }
                None => fail(
                    TangentStatus::Unavailable,
                    &format!("no tangent direction for verdict {}", r.verdict),
                ),
            }
        })
    }
}

/// Tangent line as base point plus unit direction. Unavailable unless
/// the verdict is Tangent.
///
/// # Safety
/// `report` must be a live handle; `out_point_xyz` and `out_dir_xyz`
/// must each point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_line(
    report: *const TangentReport,
    out_point_xyz: *mut f64,
    out_dir_xyz: *mut f64,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out_point_xyz.is_null() || out_dir_xyz.is_null() {
                return fail(TangentStatus::NullArgument, "out pointers must not be NULL");
            }
            match tangent_line(r) {
                Ok(line) => {
                    let p = line.point.to_array();
                    let d = line.direction.to_array();
                    std::ptr::copy_nonoverlapping(p.as_ptr(), out_point_xyz, 3);
                    std::ptr::copy_nonoverlapping(d.as_ptr(), out_dir_xyz, 3);
                    TangentStatus::Ok
                }
                Err(e) => fail(TangentStatus::Unavailable, &e.to_string()),
            }
        })
    }
}

/// Collinearity residual between the side limits, when both exist.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_residual(
    report: *const TangentReport,
    out: *mut f64,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out.is_null() {
                return fail(TangentStatus::NullArgument, "out must not be NULL");
            }
            match r.collinearity_residual {
                Some(residual) => {
                    *out = residual;
                    TangentStatus::Ok
                }
                None => fail(
                    TangentStatus::Unavailable,
                    "no collinearity residual recorded",
                ),
            }
        })
    }
}

/// Probe counts consumed by the minus and plus side estimates.
///
/// # Safety
/// `report` must be a live handle; `out_minus` and `out_plus` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_steps(
    report: *const TangentReport,
    out_minus: *mut usize,
    out_plus: *mut usize,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out_minus.is_null() || out_plus.is_null() {
                return fail(TangentStatus::NullArgument, "out pointers must not be NULL");
            }
            *out_minus = r.minus.steps_used();
            *out_plus = r.plus.steps_used();
            TangentStatus::Ok
        })
    }
}

/// Render the report as one machine-format JSON record (same schema as
/// the CLI's machine output). The caller owns `*out` and frees it with
/// `tangent_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tangent_report_json(
    report: *const TangentReport,
    out: *mut *mut c_char,
) -> TangentStatus {
    unsafe {
        with_report(report, |r| {
            if out.is_null() {
                return fail(TangentStatus::NullArgument, "out must not be NULL");
            }
            let line = MachineRecord::from_report(r).to_json_line();
            match CString::new(line) {
                Ok(s) => {
                    *out = s.into_raw();
                    TangentStatus::Ok
                }
                Err(e) => fail(TangentStatus::Panic, &e.to_string()),
            }
        })
    }
}

/// Free a string returned through a `char **` out-parameter. NULL is a
/// no-op.
///
/// # Safety
/// `s` must be NULL or an unfreed string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn tangent_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
