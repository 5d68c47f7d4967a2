//! C ABI for the d2dsim library.
//!
//! Configurations travel as opaque handles created from JSON (or the
//! built-in baseline) and freed by the caller; every fallible call
//! returns a status code and writes its result through out-pointers.
//! The generated header lives at `include/d2dsim.h`.

use d2dsim::analytic::{alpha_bounds, cellular_outage, d2d_outage, CellularVariant};
use d2dsim::bessel::bessel_k1;
use d2dsim::montecarlo::estimate_outage;
use d2dsim::SystemConfig;
use std::ffi::{c_char, c_int, CStr};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D2dsimStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The config JSON failed to parse or was not UTF-8.
    InvalidJson = 2,
    /// The config parsed but violated a parameter constraint.
    InvalidConfig = 3,
    /// A scalar argument was out of domain.
    InvalidArgument = 4,
}

/// Selector for the two printed forms of the cellular outage.
pub const D2DSIM_VARIANT_LITERAL: c_int = 0;
pub const D2DSIM_VARIANT_CORRECTED: c_int = 1;

/// Opaque handle to a validated system configuration.
pub struct D2dsimConfig {
    inner: SystemConfig,
}

/// Monte Carlo estimate returned by `d2dsim_estimate_outage`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct D2dsimEstimate {
    pub trials: u64,
    /// Empirical cellular outage probability and its 99% half-width.
    pub p_oc: f64,
    pub p_oc_ci: f64,
    /// Empirical D2D outage probability and its 99% half-width.
    pub p_od: f64,
    pub p_od_ci: f64,
    /// Trials ending in operating case 1..4.
    pub cases: [u64; 4],
}

fn store_config(cfg: SystemConfig, out: *mut *mut D2dsimConfig) -> D2dsimStatus {
    let handle = Box::new(D2dsimConfig { inner: cfg });
    // SAFETY: caller guaranteed `out` is valid for writes (checked non-null).
    unsafe { *out = Box::into_raw(handle) };
    D2dsimStatus::Ok
}

/// Create a config with the built-in baseline parameters.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_config_default(out: *mut *mut D2dsimConfig) -> D2dsimStatus {
    if out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    store_config(SystemConfig::baseline(), out)
}

/// Parse a JSON config document (same schema as the CLI `--config` file).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_config_from_json(
    json: *const c_char,
    out: *mut *mut D2dsimConfig,
) -> D2dsimStatus {
    if json.is_null() || out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(json) }.to_str() {
        Ok(text) => text,
        Err(_) => return D2dsimStatus::InvalidJson,
    };
    match SystemConfig::from_json_str(text) {
        Ok(cfg) => store_config(cfg, out),
        Err(d2dsim::ConfigError::Invalid { .. }) => D2dsimStatus::InvalidConfig,
        Err(_) => D2dsimStatus::InvalidJson,
    }
}

/// Free a config handle. Null is a no-op.
///
/// # Safety
/// `cfg` must have come from a `d2dsim_config_*` constructor and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_config_free(cfg: *mut D2dsimConfig) {
    if !cfg.is_null() {
        // SAFETY: caller guarantees the pointer came from Box::into_raw.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Modified Bessel function of the second kind, order one.
/// `x <= 0` or non-finite input yields `D2DSIM_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `out` must be valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_bessel_k1(x: f64, out: *mut f64) -> D2dsimStatus {
    if out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    let value = bessel_k1(x);
    if value.is_nan() {
        return D2dsimStatus::InvalidArgument;
    }
    unsafe { *out = value };
    D2dsimStatus::Ok
}

/// Closed-form cellular outage probability for the given variant
/// (`D2DSIM_VARIANT_LITERAL` or `D2DSIM_VARIANT_CORRECTED`).
///
/// # Safety
/// `cfg` must be a live config handle; `out` must be valid for writing
/// one double.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_cellular_outage(
    cfg: *const D2dsimConfig,
    variant: c_int,
    out: *mut f64,
) -> D2dsimStatus {
    if cfg.is_null() || out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    let variant = match variant {
        D2DSIM_VARIANT_LITERAL => CellularVariant::Literal,
        D2DSIM_VARIANT_CORRECTED => CellularVariant::Corrected,
        _ => return D2dsimStatus::InvalidArgument,
    };
    let cfg = unsafe { &(*cfg).inner };
    unsafe { *out = cellular_outage(cfg, variant) };
    D2dsimStatus::Ok
}

/// Closed-form D2D outage probability (printed four-branch form).
///
/// # Safety
/// `cfg` must be a live config handle; `out` must be valid for writing
/// one double.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_d2d_outage(
    cfg: *const D2dsimConfig,
    out: *mut f64,
) -> D2dsimStatus {
    if cfg.is_null() || out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    let cfg = unsafe { &(*cfg).inner };
    unsafe { *out = d2d_outage(cfg) };
    D2dsimStatus::Ok
}

/// Alpha feasibility bounds `(1 - delta, 1 - mu)`. Values at or below 0
/// (including -inf) mean no feasible alpha exists for that path.
///
/// # Safety
/// `cfg` must be a live config handle; both out-pointers must be valid
/// for writing one double each.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_alpha_bounds(
    cfg: *const D2dsimConfig,
    delta_bound: *mut f64,
    mu_bound: *mut f64,
) -> D2dsimStatus {
    if cfg.is_null() || delta_bound.is_null() || mu_bound.is_null() {
        return D2dsimStatus::NullPointer;
    }
    let bounds = alpha_bounds(unsafe { &(*cfg).inner });
    unsafe {
        *delta_bound = bounds.delta_bound;
        *mu_bound = bounds.mu_bound;
    }
    D2dsimStatus::Ok
}

/// Monte Carlo outage estimate over `trials` seeded trials. The result
/// is bit-identical for a fixed `(seed, trials)` regardless of `workers`.
///
/// # Safety
/// `cfg` must be a live config handle; `out` must be valid for writing
/// one `D2dsimEstimate`.
#[no_mangle]
pub unsafe extern "C" fn d2dsim_estimate_outage(
    cfg: *const D2dsimConfig,
    trials: u64,
    seed: u64,
    workers: u32,
    out: *mut D2dsimEstimate,
) -> D2dsimStatus {
    if cfg.is_null() || out.is_null() {
        return D2dsimStatus::NullPointer;
    }
    if trials == 0 {
        return D2dsimStatus::InvalidArgument;
    }
    let cfg = unsafe { &(*cfg).inner };
    let est = estimate_outage(cfg, trials, seed, workers.max(1) as usize);
    unsafe {
        *out = D2dsimEstimate {
            trials: est.trials,
            p_oc: est.p_oc_hat,
            p_oc_ci: est.ci_halfwidth_oc,
            p_od: est.p_od_hat,
            p_od_ci: est.ci_halfwidth_od,
            cases: est.case_histogram,
        };
    }
    D2dsimStatus::Ok
}
