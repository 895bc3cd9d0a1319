//! Location and certification of the bifurcation periods `T_*` and `T^*`,
//! resonance detection, kernel dimensions, and first-order branch boundary
//! profiles.
//!
//! `sigma` is strictly increasing on `(0, delta)` and `(delta, +inf)` with
//! exactly one zero on each side, so both roots are found by bisection on
//! sign changes. For `N = 1` the lower zero sits exactly at the branch
//! point `mu = 4/3`; widening the left bracket below `mu` (where `sigma`
//! is negative for every `N`) lets one bisection routine serve all
//! dimensions.

use crate::dispersion::{self, StructuralConstants};
use crate::error::{Error, Result};
use crate::spectrum::BallSpectrum;
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

/// Absolute target accuracy of both roots.
pub const ROOT_TOLERANCE: f64 = 1e-10;
/// Default tolerance on `|T^*/T_* - m|` for reporting a resonance.
pub const RESONANCE_RATIO_TOL: f64 = 1e-8;
/// `|sigma_k(T)|` below `1e-8 (1 + phi_2'(1))` counts the mode into the
/// kernel.
pub const KERNEL_TOLERANCE: f64 = 1e-8;

/// Certified bifurcation data for one dimension.
///
/// `bracket_widths` records the final bisection bracket width for each
/// root; it is diagnostic data and is omitted from the JSON form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BifurcationReport {
    pub n: u32,
    pub t_star: f64,
    pub t_upper_star: f64,
    pub dsigma_star: f64,
    pub dsigma_upper: f64,
    pub resonance_m: Option<u32>,
    pub kernel_dim_star: u32,
    pub kernel_dim_upper: u32,
    #[serde(skip)]
    pub bracket_widths: (f64, f64),
}

/// Which certified root a branch profile is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchPoint {
    Star,
    UpperStar,
}

/// First-order boundary profile `R(t) = 1 + s (beta cos(2 pi t / T) +
/// gamma cos(2 m pi t / T))` sampled over one period (the `o(s)` corrector
/// `w_s` is truncated to zero).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchProfile {
    pub t: f64,
    pub s: f64,
    pub beta: f64,
    pub gamma: f64,
    pub m: Option<u32>,
    pub samples: Vec<(f64, f64)>,
}

/// Transversality certificate at a root: the analytic slope, the secant
/// slope across the root, and their relative difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransversalityCheck {
    pub dsigma: f64,
    pub secant: f64,
    pub rel_diff: f64,
}

fn sigma_at(spec: &BallSpectrum, t: f64) -> Result<f64> {
    Ok(dispersion::sigma(spec, t)?.sigma)
}

/// Bisection on a certified sign change, followed by two secant steps to
/// push `|sigma|` to rounding level. Returns the root and the final
/// bracket width.
fn bisect_root(spec: &BallSpectrum, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let mut f_lo = sigma_at(spec, lo)?;
    let f_hi = sigma_at(spec, hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: sigma = {f_lo:e}, {f_hi:e}"
        )));
    }
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let f_mid = sigma_at(spec, mid)?;
        if f_mid == 0.0 {
            return Ok((mid, hi - lo));
        }
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let width = hi - lo;
    // Secant polish inside the bracket; sigma is smooth and strictly
    // increasing here, so two steps reach machine accuracy.
    let mut a = lo;
    let mut b = hi;
    let mut fa = f_lo;
    let mut fb = sigma_at(spec, hi)?;
    for _ in 0..2 {
        if fb == fa {
            break;
        }
        let c = (b - fb * (b - a) / (fb - fa)).clamp(lo, hi);
        let fc = sigma_at(spec, c)?;
        a = b;
        fa = fb;
        b = c;
        fb = fc;
    }
    Ok((b, width))
}

/// Unique zero of `sigma` in `[mu, delta)`, to absolute error 1e-10.
///
/// The bracket starts at `mu (1 - 1e-6)` so the `N = 1` endpoint zero at
/// `mu` itself is captured by the same sign-change logic.
pub fn find_t_star(spec: &BallSpectrum) -> Result<(f64, f64)> {
    let sc = dispersion::structural_constants(spec);
    bisect_root(spec, sc.mu * (1.0 - 1e-6), sc.delta - 1e-6)
}

/// Unique zero of `sigma` in `(delta, +inf)`, to absolute error 1e-10. The
/// right bracket is found by doubling the distance from `delta` until
/// `sigma > 0`.
pub fn find_t_upper_star(spec: &BallSpectrum) -> Result<(f64, f64)> {
    let sc = dispersion::structural_constants(spec);
    let lo = sc.delta + 1e-3;
    if sigma_at(spec, lo)? >= 0.0 {
        return Err(Error::Bracket(format!(
            "sigma just right of delta is not negative for N={}",
            spec.n
        )));
    }
    let mut hi = sc.delta + 0.1;
    let mut doublings = 0;
    while sigma_at(spec, hi)? <= 0.0 {
        hi = sc.delta + 2.0 * (hi - sc.delta);
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Bracket(
                "sigma never turned positive past delta".into(),
            ));
        }
    }
    bisect_root(spec, lo, hi)
}

/// Reports `m = round(T^*/T_*)` when `m >= 2` and the ratio sits within
/// `tol` of the integer; `None` otherwise. A near-integer ratio within
/// tolerance is reported as resonant and should be reviewed manually; the
/// root accuracy supports tolerances down to about 1e-9.
pub fn resonance_report(t_star: f64, t_upper_star: f64, tol: f64) -> Option<u32> {
    let ratio = t_upper_star / t_star;
    let m = ratio.round();
    if m >= 2.0 && (ratio - m).abs() <= tol {
        Some(m as u32)
    } else {
        None
    }
}

/// Number of modes `k in {1..k_max}` with `sigma_k(T)` inside the kernel
/// tolerance.
pub fn kernel_dimension(spec: &BallSpectrum, t: f64, k_max: u32) -> Result<u32> {
    let threshold = KERNEL_TOLERANCE * (1.0 + spec.dphi2.abs());
    let mut dim = 0;
    for k in 1..=k_max {
        let s = dispersion::sigma_k(spec, k, t)?;
        if s.abs() <= threshold {
            dim += 1;
        }
    }
    Ok(dim)
}

/// Certifies `sigma'(T_root) > 0` and its agreement with the secant slope
/// of `sigma` across the root (relative difference at most 1e-4).
pub fn transversality(spec: &BallSpectrum, t_root: f64) -> Result<TransversalityCheck> {
    let dsigma = dispersion::sigma_prime(spec, t_root)?;
    let e = 1e-6;
    let secant =
        (sigma_at(spec, t_root + e)? - sigma_at(spec, t_root - e)?) / (2.0 * e);
    let rel_diff = (dsigma - secant).abs() / dsigma.abs().max(f64::MIN_POSITIVE);
    if dsigma <= 0.0 {
        return Err(Error::Transversality(format!(
            "sigma'({t_root}) = {dsigma} is not positive"
        )));
    }
    if rel_diff > 1e-4 {
        return Err(Error::Transversality(format!(
            "slope {dsigma} and secant {secant} differ by {rel_diff:e}"
        )));
    }
    Ok(TransversalityCheck {
        dsigma,
        secant,
        rel_diff,
    })
}

/// Runs both root finders and assembles the full report.
pub fn bifurcation_report(spec: &BallSpectrum) -> Result<BifurcationReport> {
    bifurcation_report_with_tol(spec, RESONANCE_RATIO_TOL)
}

/// As [`bifurcation_report`] with an explicit resonance-ratio tolerance.
pub fn bifurcation_report_with_tol(
    spec: &BallSpectrum,
    resonance_tol: f64,
) -> Result<BifurcationReport> {
    let (t_star, w_star) = find_t_star(spec)?;
    let (t_upper, w_upper) = find_t_upper_star(spec)?;
    let dsigma_star = transversality(spec, t_star)?.dsigma;
    let dsigma_upper = transversality(spec, t_upper)?.dsigma;
    let resonance_m = resonance_report(t_star, t_upper, resonance_tol);
    let kernel_dim_star = kernel_dimension(spec, t_star, 16)?;
    let kernel_dim_upper = kernel_dimension(spec, t_upper, 16)?;
    Ok(BifurcationReport {
        n: spec.n,
        t_star,
        t_upper_star: t_upper,
        dsigma_star,
        dsigma_upper,
        resonance_m,
        kernel_dim_star,
        kernel_dim_upper,
        bracket_widths: (w_star, w_upper),
    })
}

/// First-order branch boundary profile at one of the certified roots.
///
/// `beta^2 + gamma^2 = 1` is required; `gamma != 0` is only allowed at the
/// upper root in the resonant case (the kernel there is two-dimensional).
pub fn branch_profile(
    report: &BifurcationReport,
    which: BranchPoint,
    s: f64,
    beta: f64,
    gamma: f64,
    n_samples: usize,
) -> Result<BranchProfile> {
    if n_samples < 2 {
        return Err(Error::Domain("need at least 2 profile samples".into()));
    }
    if (beta * beta + gamma * gamma - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "beta^2 + gamma^2 = {} != 1",
            beta * beta + gamma * gamma
        )));
    }
    let resonant_here = matches!(which, BranchPoint::UpperStar) && report.resonance_m.is_some();
    if gamma != 0.0 && !resonant_here {
        return Err(Error::ResonanceContract(format!(
            "gamma = {gamma} requires a resonant kernel at the chosen root"
        )));
    }
    let t = match which {
        BranchPoint::Star => report.t_star,
        BranchPoint::UpperStar => report.t_upper_star,
    };
    let m = if resonant_here && gamma != 0.0 {
        report.resonance_m
    } else {
        None
    };
    let m_freq = report.resonance_m.unwrap_or(1) as f64;
    let omega = 2.0 * core::f64::consts::PI / t;
    let mut samples = Vec::with_capacity(n_samples);
    let mut min_r = f64::INFINITY;
    for i in 0..n_samples {
        let ti = t * i as f64 / n_samples as f64;
        let r = 1.0 + s * (beta * (omega * ti).cos() + gamma * (m_freq * omega * ti).cos());
        min_r = min_r.min(r);
        samples.push((ti, r));
    }
    if min_r <= 0.0 {
        return Err(Error::Amplitude { min_r });
    }
    Ok(BranchProfile {
        t,
        s,
        beta,
        gamma,
        m,
        samples,
    })
}

/// Convenience accessor for `mu` and `delta` alongside the report.
pub fn constants_for(spec: &BallSpectrum) -> StructuralConstants {
    dispersion::structural_constants(spec)
}
