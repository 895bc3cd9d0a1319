//! Numerical audits of the Turan-type inequality
//! `J_nu^2(s) > J_{nu-1}(s) J_{nu+1}(s)` and of the monotonicity facts for
//! the ratios `h(s) = s J_{nu+1}/J_nu` and `f(s) = s I_{nu+1}/I_nu`,
//! including the documented failure of zero interlacing for negative
//! order.
//!
//! Grid scans cannot prove strict inequalities; the reports carry the
//! minimum observed margin (after two rounds of 10x local refinement
//! around the argmin) as numerical evidence, not proof.

use crate::bessel::{self, Order, ZeroIndex};
use crate::error::{Error, Result};
use crate::spectrum::BallSpectrum;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

/// Result of one margin scan over a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanReport {
    pub nu: f64,
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
    pub min_margin: f64,
    pub argmin: f64,
    pub passed: bool,
}

/// One entry of the interlacing audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingRecord {
    pub tau: f64,
    pub passed: bool,
    /// Human-readable violation, present exactly when `passed` is false.
    pub counterexample: Option<String>,
}

/// Turan margin `J_nu^2(s) - J_{nu-1}(s) J_{nu+1}(s)` at one point.
pub fn turan_margin(nu: f64, s: f64) -> Result<f64> {
    let j_m = bessel::bessel_j(Order::new(nu - 1.0)?, s)?;
    let j_0 = bessel::bessel_j(Order::new(nu)?, s)?;
    let j_p = bessel::bessel_j(Order::new(nu + 1.0)?, s)?;
    Ok(j_0 * j_0 - j_m * j_p)
}

fn scan<F: Fn(f64) -> Result<f64>>(
    nu: f64,
    lo: f64,
    hi: f64,
    n: usize,
    f: &F,
    refine: bool,
) -> Result<ScanReport> {
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::Domain(format!("bad scan interval ({lo}, {hi})")));
    }
    if n < 2 {
        return Err(Error::Domain("scan needs at least 2 points".into()));
    }
    let mut min_margin = f64::INFINITY;
    let mut argmin = lo;
    let mut grid_step = (hi - lo) / (n - 1) as f64;
    for i in 0..n {
        let s = lo + grid_step * i as f64;
        let m = f(s)?;
        if m < min_margin {
            min_margin = m;
            argmin = s;
        }
    }
    if refine {
        // Two rounds of 10x local refinement around the argmin.
        for _ in 0..2 {
            let a = (argmin - grid_step).max(lo);
            let b = (argmin + grid_step).min(hi);
            grid_step = (b - a) / 20.0;
            for i in 0..=20 {
                let s = a + grid_step * i as f64;
                let m = f(s)?;
                if m < min_margin {
                    min_margin = m;
                    argmin = s;
                }
            }
        }
    }
    Ok(ScanReport {
        nu,
        lo,
        hi,
        n_points: n,
        min_margin,
        argmin,
        passed: min_margin > 0.0,
    })
}

/// Scans the Turan margin for the spectrum's order on `(lo, hi)`,
/// `0 < lo < hi <= sqrt(lambda_2)`.
pub fn turan_margin_scan(
    spec: &BallSpectrum,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<ScanReport> {
    if hi > spec.lambda2.sqrt() + 1e-12 {
        return Err(Error::Domain(format!(
            "turan scan interval must stay inside (0, sqrt(lambda2) = {})",
            spec.lambda2.sqrt()
        )));
    }
    let nu = spec.nu;
    scan(nu, lo, hi, n, &|s| turan_margin(nu, s), true)
}

/// Scans the finite-difference derivative of `h(s) = s J_{nu+1}/J_nu` for
/// positivity. The interval must avoid the poles of `h` (zeros of `J_nu`);
/// hitting one raises `Pole`.
pub fn h_monotonicity_scan(
    spec: &BallSpectrum,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<ScanReport> {
    let nu = Order::new(spec.nu)?;
    let step = (hi - lo) / (10.0 * n as f64);
    scan(
        spec.nu,
        lo,
        hi,
        n,
        &|s| {
            let a = bessel::ratio_h(nu, s - step)?;
            let b = bessel::ratio_h(nu, s + step)?;
            Ok((b - a) / (2.0 * step))
        },
        false,
    )
}

/// Scans the finite-difference derivative of `f(s) = s I_{nu+1}/I_nu` for
/// positivity on `(lo, hi)` with `hi <= 50`.
pub fn f_monotonicity_scan(nu: Order, lo: f64, hi: f64, n: usize) -> Result<ScanReport> {
    if hi > 50.0 {
        return Err(Error::Domain(format!("f scan bounded by S_max = 50, got {hi}")));
    }
    let step = (hi - lo) / (10.0 * n as f64);
    scan(
        nu.get(),
        lo,
        hi,
        n,
        &|s| {
            let a = bessel::ratio_f(nu, s - step)?;
            let b = bessel::ratio_f(nu, s + step)?;
            Ok((b - a) / (2.0 * step))
        },
        false,
    )
}

/// Positive zeros for the audit; order -1 goes through `J_{-1} = -J_1`.
fn zeros_for_audit(tau: f64, k: u32) -> Result<f64> {
    let idx = ZeroIndex::new(k)?;
    if tau == -1.0 {
        bessel::bessel_zero(Order::new(1.0)?, idx)
    } else if tau >= -0.5 {
        bessel::bessel_zero(Order::new(tau)?, idx)
    } else {
        Err(Error::Domain(format!(
            "audit supports tau = -1 or tau >= -1/2, got {tau}"
        )))
    }
}

/// Checks the interlacing chains
/// `j_{tau,k} < j_{tau+1,k} < j_{tau,k+1}` for each listed order. For
/// `tau >= 0` these always hold; `tau = -1` records the documented
/// counterexample (`j_{-1,1} = j_{1,1} > j_{0,1}`) instead of failing.
pub fn interlacing_audit(taus: &[f64], k_max: u32) -> Result<Vec<InterlacingRecord>> {
    if k_max < 2 {
        return Err(Error::Domain("interlacing audit needs k_max >= 2".into()));
    }
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let mut counterexample = None;
        'chain: for k in 1..k_max {
            let a = zeros_for_audit(tau, k)?;
            let b = zeros_for_audit(tau + 1.0, k)?;
            let c = zeros_for_audit(tau, k + 1)?;
            if !(a < b) {
                counterexample = Some(format!(
                    "j_({tau},{k}) = {a:.12} >= j_({},{k}) = {b:.12}",
                    tau + 1.0
                ));
                break 'chain;
            }
            if !(b < c) {
                counterexample = Some(format!(
                    "j_({},{k}) = {b:.12} >= j_({tau},{}) = {c:.12}",
                    tau + 1.0,
                    k + 1
                ));
                break 'chain;
            }
        }
        out.push(InterlacingRecord {
            tau,
            passed: counterexample.is_none(),
            counterexample,
        });
    }
    Ok(out)
}
