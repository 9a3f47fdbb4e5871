//! C ABI over `simpson-gibbs`.
//!
//! Models and samples are opaque heap handles created by `sg_*_new` and
//! released by the matching `sg_*_free`. Every fallible call returns an
//! [`SgStatus`]; on failure `sg_last_error_message` describes the error for
//! the calling thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simpson_gibbs::sim::{mc_posterior_evenness, McConfig};
use simpson_gibbs::{
    log_eppf, posterior_evenness, prior_evenness, richness_predictive, summarize_sample, validate_model, Error,
    ModelSpec, RawModel, SampleSummary, Variant,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidModel = 2,
    InvalidSample = 3,
    Domain = 4,
    BufferTooSmall = 5,
    Simulation = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgVariant {
    PoissonDirichlet = 0,
    Ewens = 1,
    Stable = 2,
    Fisher = 3,
}

/// Mean and variance of Simpson's evenness index.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Monte Carlo moments with standard errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgMcResult {
    pub mean: f64,
    pub mean_std_error: f64,
    pub variance: f64,
    pub variance_std_error: f64,
    pub residual_bound: f64,
    pub draws: u64,
}

/// Opaque validated model.
pub struct SgModel {
    inner: ModelSpec,
}

/// Opaque sample summary.
pub struct SgSample {
    inner: SampleSummary,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SgStatus {
    match err {
        Error::InvalidModel(_) => SgStatus::InvalidModel,
        Error::InvalidSample(_) | Error::Data { .. } | Error::Io(_) => SgStatus::InvalidSample,
        Error::Domain(_) => SgStatus::Domain,
        Error::InvalidConfig(_) | Error::TruncationCap { .. } => SgStatus::Simulation,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (SgStatus, String)>>(body: F) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SgStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (SgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SgStatus, String) {
    (SgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SgStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates a model. Pass NaN for `alpha`/`theta` and 0 for `xi` to leave
/// them unspecified (e.g. `theta` for Stable, `xi` unless `alpha < 0`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sg_model_new(
    variant: SgVariant,
    alpha: f64,
    theta: f64,
    xi: u64,
    out: *mut *mut SgModel,
) -> SgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let variant = match variant {
            SgVariant::PoissonDirichlet => Variant::PoissonDirichlet,
            SgVariant::Ewens => Variant::Ewens,
            SgVariant::Stable => Variant::Stable,
            SgVariant::Fisher => Variant::Fisher,
        };
        let raw = RawModel {
            variant: Some(variant),
            alpha: (!alpha.is_nan()).then_some(alpha),
            theta: (!theta.is_nan()).then_some(theta),
            xi: (xi != 0).then_some(xi),
        };
        let inner = validate_model(raw).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SgModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from `sg_model_new` and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sg_model_free(model: *mut SgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Writes the normalized PD parameters of a model.
///
/// # Safety
/// All pointers must be valid; `xi` receives 0 when the model has no ξ.
#[no_mangle]
pub unsafe extern "C" fn sg_model_params(
    model: *const SgModel,
    alpha: *mut f64,
    theta: *mut f64,
    xi: *mut u64,
) -> SgStatus {
    guard(|| {
        let m = &deref(model, "model")?.inner;
        if alpha.is_null() || theta.is_null() || xi.is_null() {
            return Err(null("output"));
        }
        *alpha = m.alpha();
        *theta = m.theta();
        *xi = m.xi().unwrap_or(0);
        Ok(())
    })
}

/// Builds a sample from `len` species counts (each at least one). `counts`
/// may be null when `len` is zero.
///
/// # Safety
/// `counts` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_sample_new(counts: *const u64, len: usize, out: *mut *mut SgSample) -> SgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let slice: &[u64] = if len == 0 {
            &[]
        } else if counts.is_null() {
            return Err(null("counts"));
        } else {
            std::slice::from_raw_parts(counts, len)
        };
        let inner = summarize_sample(slice).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SgSample { inner }));
        Ok(())
    })
}

/// # Safety
/// `sample` must come from `sg_sample_new` and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sg_sample_free(sample: *mut SgSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Total observations; 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_sample_n(sample: *const SgSample) -> u64 {
    sample.as_ref().map_or(0, |s| s.inner.n())
}

/// Distinct species; 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sg_sample_k(sample: *const SgSample) -> u64 {
    sample.as_ref().map_or(0, |s| s.inner.k())
}

/// Closed-form prior mean and variance of `H_S`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_prior_evenness(model: *const SgModel, out: *mut SgMoments) -> SgStatus {
    guard(|| {
        let m = &deref(model, "model")?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = prior_evenness(m);
        *out = SgMoments {
            mean: e.mean,
            variance: e.variance,
        };
        Ok(())
    })
}

/// Closed-form posterior mean and variance of `H_S` (prior for an empty sample).
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_posterior_evenness(
    model: *const SgModel,
    sample: *const SgSample,
    out: *mut SgMoments,
) -> SgStatus {
    guard(|| {
        let m = &deref(model, "model")?.inner;
        let s = &deref(sample, "sample")?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = posterior_evenness(m, s);
        *out = SgMoments {
            mean: e.mean,
            variance: e.variance,
        };
        Ok(())
    })
}

/// Natural log of the partition probability of the sample.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_log_eppf(model: *const SgModel, sample: *const SgSample, out: *mut f64) -> SgStatus {
    guard(|| {
        let m = &deref(model, "model")?.inner;
        let s = &deref(sample, "sample")?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = log_eppf(m, s).map_err(lib_err)?;
        Ok(())
    })
}

/// Writes `P(K_m = j)` for `j = 0..=m` into `probs`, which must hold at
/// least `m + 1` values; `expected` (optional) receives `E[K_m]`.
///
/// # Safety
/// Handles must be live; `probs` must point to `capacity` writable values.
#[no_mangle]
pub unsafe extern "C" fn sg_richness_predictive(
    model: *const SgModel,
    sample: *const SgSample,
    m: u64,
    probs: *mut f64,
    capacity: usize,
    expected: *mut f64,
) -> SgStatus {
    guard(|| {
        let model = &deref(model, "model")?.inner;
        let s = &deref(sample, "sample")?.inner;
        if probs.is_null() {
            return Err(null("probs"));
        }
        let needed = usize::try_from(m).ok().and_then(|m| m.checked_add(1));
        match needed {
            Some(n) if n <= capacity => {}
            _ => {
                return Err((
                    SgStatus::BufferTooSmall,
                    format!("need {} slots, got {capacity}", m as u128 + 1),
                ))
            }
        }
        let dist = richness_predictive(model, s, m);
        std::slice::from_raw_parts_mut(probs, dist.probs.len()).copy_from_slice(&dist.probs);
        if let Some(e) = expected.as_mut() {
            *e = dist.mean();
        }
        Ok(())
    })
}

/// Monte Carlo moments of `H_S`; pass a null `sample` for the prior.
/// Non-positive `tol` or zero `max_sticks` select the library defaults.
///
/// # Safety
/// `model` must be live, `sample` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_mc_evenness(
    model: *const SgModel,
    sample: *const SgSample,
    draws: u64,
    tol: f64,
    seed: u64,
    max_sticks: usize,
    out: *mut SgMcResult,
) -> SgStatus {
    guard(|| {
        let m = &deref(model, "model")?.inner;
        let empty = SampleSummary::empty();
        let s = sample.as_ref().map_or(&empty, |s| &s.inner);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let defaults = McConfig::default();
        let config = McConfig {
            draws,
            truncation_tol: if tol > 0.0 { tol } else { defaults.truncation_tol },
            seed,
            max_sticks: if max_sticks > 0 {
                max_sticks
            } else {
                defaults.max_sticks
            },
        };
        let mc = mc_posterior_evenness(m, s, &config).map_err(lib_err)?;
        *out = SgMcResult {
            mean: mc.mean.value,
            mean_std_error: mc.mean.std_error,
            variance: mc.variance,
            variance_std_error: mc.variance_std_error,
            residual_bound: mc.mean.residual_bound,
            draws: mc.mean.draws,
        };
        Ok(())
    })
}
