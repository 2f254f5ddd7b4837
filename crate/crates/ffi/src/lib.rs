//! C ABI for `xbound`.
//!
//! States cross the boundary as opaque `XbDensity` handles created by one of
//! the `xb_density_*` constructors and released with [`xb_density_free`].
//! Every fallible call returns an [`XbStatus`]; on failure the message is
//! available from [`xb_last_error_message`] on the same thread. Output
//! pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use xbound::highdim::{generalized_lower_bound, pair_bound_oriented, Orientation, PairIndex};
use xbound::linalg::{c64, sample_random_density, CMatrix, Dims, Tolerances};
use xbound::oracle::{
    convex_roof_upper, fuzz_inequality, optimize_basis, FuzzConfig, OptimizerConfig,
};
use xbound::reference_states::{
    isotropic_bound_closed_form, isotropic_exact_concurrence, isotropic_matrix, werner_state,
    IsotropicState,
};
use xbound::two_qubit::{certify_from_elements, wootters_concurrence, x_lower_bound, Verdict};
use xbound::{DensityMatrix, Error};

/// Opaque validated density matrix.
pub struct XbDensity {
    inner: DensityMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotHermitian = 3,
    TraceNotOne = 4,
    NotPositive = 5,
    WrongDimensions = 6,
    OutOfRange = 7,
    IndexOutOfRange = 8,
    InvariantViolation = 9,
    ParseError = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct XbBoundReport {
    pub c1: f64,
    pub c2: f64,
    pub bound: f64,
    /// NaN when no exact value is known.
    pub exact: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct XbGeneralizedBound {
    pub bound: f64,
    pub best: f64,
    /// False when the state has no index pairs (a local dimension of 1).
    pub has_pair: bool,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    /// 0 = direct, 1 = mirrored.
    pub orientation: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct XbCertificate {
    pub c1: f64,
    pub entangled: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct XbFuzzReport {
    pub trials: usize,
    pub violations: usize,
    pub max_gap: f64,
    pub min_slack: f64,
    pub pure_checks: usize,
    pub pure_violations: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct XbBasisOptimum {
    pub original_bound: f64,
    pub best_bound: f64,
    pub exact: f64,
    /// ZYZ Euler angles of uA then uB.
    pub angles: [f64; 6],
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> XbStatus {
    match e {
        Error::NotHermitian { .. } => XbStatus::NotHermitian,
        Error::TraceNotOne { .. } => XbStatus::TraceNotOne,
        Error::NotPositive { .. } => XbStatus::NotPositive,
        Error::WrongDimensions { .. }
        | Error::ShapeMismatch { .. }
        | Error::InvalidDimensions { .. } => XbStatus::WrongDimensions,
        Error::OutOfRange { .. } | Error::InvalidRank { .. } => XbStatus::OutOfRange,
        Error::IndexOutOfRange { .. } => XbStatus::IndexOutOfRange,
        Error::Invariant(_) => XbStatus::InvariantViolation,
        Error::Format(_) | Error::Json(_) => XbStatus::ParseError,
        _ => XbStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard<F>(f: F) -> XbStatus
where
    F: FnOnce() -> Result<(), (XbStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside xbound".into());
            XbStatus::Panic
        }
    }
}

fn lift(e: Error) -> (XbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (XbStatus, String) {
    (XbStatus::NullPointer, format!("{name} is null"))
}

unsafe fn handle<'a>(h: *const XbDensity) -> Result<&'a DensityMatrix, (XbStatus, String)> {
    h.as_ref().map(|d| &d.inner).ok_or_else(|| null("handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (XbStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit(out: *mut *mut XbDensity, q: DensityMatrix) -> Result<(), (XbStatus, String)> {
    write_out(out, Box::into_raw(Box::new(XbDensity { inner: q })))
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn xb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates a `(dim_a*dim_b)^2` row-major matrix given as separate real and
/// imaginary arrays.
///
/// # Safety
/// `re` and `im` must each point to `(dim_a*dim_b)^2` doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_new(
    dim_a: usize,
    dim_b: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut XbDensity,
) -> XbStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let dims = Dims::new(dim_a, dim_b).map_err(lift)?;
        let n = dims.total();
        let re = std::slice::from_raw_parts(re, n * n);
        let im = std::slice::from_raw_parts(im, n * n);
        let m = CMatrix::from_fn(n, n, |r, c| c64::new(re[r * n + c], im[r * n + c]));
        let q = xbound::linalg::validate_density(m, dims, &Tolerances::default()).map_err(lift)?;
        emit(out, q)
    })
}

/// Parses the JSON density-matrix format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_from_json(
    json: *const c_char,
    out: *mut *mut XbDensity,
) -> XbStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (XbStatus::ParseError, e.to_string()))?;
        let q = xbound::io::parse_density(text, &Tolerances::default()).map_err(lift)?;
        emit(out, q)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_isotropic(
    d: usize,
    fidelity: f64,
    out: *mut *mut XbDensity,
) -> XbStatus {
    guard(|| {
        let s = IsotropicState::new(d, fidelity).map_err(lift)?;
        emit(out, isotropic_matrix(&s))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_werner(p: f64, out: *mut *mut XbDensity) -> XbStatus {
    guard(|| emit(out, werner_state(p).map_err(lift)?))
}

/// Random state of the given rank; deterministic in `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_random(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut XbDensity,
) -> XbStatus {
    guard(|| {
        let dims = Dims::new(dim_a, dim_b).map_err(lift)?;
        emit(out, sample_random_density(dims, rank, seed).map_err(lift)?)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `h` must come from an `xb_density_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn xb_density_free(h: *mut XbDensity) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `dim_a`, `dim_b` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_density_dims(
    h: *const XbDensity,
    dim_a: *mut usize,
    dim_b: *mut usize,
) -> XbStatus {
    guard(|| {
        let d = handle(h)?.dims();
        write_out(dim_a, d.a)?;
        write_out(dim_b, d.b)
    })
}

/// Two-qubit X bound with the exact (Wootters) concurrence attached.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_x_lower_bound(
    h: *const XbDensity,
    out: *mut XbBoundReport,
) -> XbStatus {
    guard(|| {
        let r = x_lower_bound(handle(h)?).map_err(lift)?;
        write_out(
            out,
            XbBoundReport {
                c1: r.c1,
                c2: r.c2,
                bound: r.bound,
                exact: r.exact.unwrap_or(f64::NAN),
            },
        )
    })
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_wootters_concurrence(h: *const XbDensity, out: *mut f64) -> XbStatus {
    guard(|| write_out(out, wootters_concurrence(handle(h)?).map_err(lift)?))
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_generalized_lower_bound(
    h: *const XbDensity,
    out: *mut XbGeneralizedBound,
) -> XbStatus {
    guard(|| {
        let g = generalized_lower_bound(handle(h)?);
        let mut r = XbGeneralizedBound {
            bound: g.bound,
            best: g.best,
            ..Default::default()
        };
        if let Some(w) = g.argmax {
            r.has_pair = true;
            (r.i, r.j, r.k, r.l) = (w.pair.i, w.pair.j, w.pair.k, w.pair.l);
            r.orientation = match w.orientation {
                Orientation::Direct => 0,
                Orientation::Mirrored => 1,
            };
        }
        write_out(out, r)
    })
}

/// Signed `C_{ik,jl}`; `mirrored` swaps the roles of `k` and `l`.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_pair_bound(
    h: *const XbDensity,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    mirrored: bool,
    out: *mut f64,
) -> XbStatus {
    guard(|| {
        let orientation = if mirrored {
            Orientation::Mirrored
        } else {
            Orientation::Direct
        };
        let v = pair_bound_oriented(handle(h)?, PairIndex::new(i, j, k, l), orientation)
            .map_err(lift)?;
        write_out(out, v)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_certify_from_elements(
    q14_abs: f64,
    d22: f64,
    d33: f64,
    out: *mut XbCertificate,
) -> XbStatus {
    guard(|| {
        let c = certify_from_elements(q14_abs, d22, d33).map_err(lift)?;
        write_out(
            out,
            XbCertificate {
                c1: c.c1,
                entangled: c.verdict == Verdict::Entangled,
            },
        )
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_isotropic_exact_concurrence(
    d: usize,
    fidelity: f64,
    out: *mut f64,
) -> XbStatus {
    guard(|| {
        let s = IsotropicState::new(d, fidelity).map_err(lift)?;
        write_out(out, isotropic_exact_concurrence(&s))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_isotropic_bound(d: usize, fidelity: f64, out: *mut f64) -> XbStatus {
    guard(|| {
        let s = IsotropicState::new(d, fidelity).map_err(lift)?;
        write_out(out, isotropic_bound_closed_form(&s))
    })
}

/// Upper bound on the concurrence from the convex-roof search.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_convex_roof_upper(
    h: *const XbDensity,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    out: *mut f64,
) -> XbStatus {
    guard(|| {
        let cfg = OptimizerConfig {
            restarts,
            max_iters,
            seed,
            ..OptimizerConfig::default()
        };
        let r = convex_roof_upper(handle(h)?, &cfg).map_err(lift)?;
        write_out(out, r.value)
    })
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xb_optimize_basis(
    h: *const XbDensity,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    out: *mut XbBasisOptimum,
) -> XbStatus {
    guard(|| {
        let cfg = OptimizerConfig {
            restarts,
            max_iters,
            seed,
            ..OptimizerConfig::default()
        };
        let r = optimize_basis(handle(h)?, &cfg).map_err(lift)?;
        write_out(
            out,
            XbBasisOptimum {
                original_bound: r.original_bound,
                best_bound: r.best_bound,
                exact: r.exact,
                angles: r.angles,
            },
        )
    })
}

/// Randomized check of `bound <= concurrence`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xb_fuzz_inequality(
    trials: usize,
    dim_a: usize,
    dim_b: usize,
    seed: u64,
    out: *mut XbFuzzReport,
) -> XbStatus {
    guard(|| {
        if trials == 0 {
            return Err((
                XbStatus::InvalidArgument,
                "trials must be at least 1".into(),
            ));
        }
        let dims = Dims::new(dim_a, dim_b).map_err(lift)?;
        let r = fuzz_inequality(&FuzzConfig::new(trials, dims, seed)).map_err(lift)?;
        write_out(
            out,
            XbFuzzReport {
                trials: r.trials,
                violations: r.violations,
                max_gap: r.max_gap,
                min_slack: r.min_slack,
                pure_checks: r.pure_checks,
                pure_violations: r.pure_violations,
            },
        )
    })
}
