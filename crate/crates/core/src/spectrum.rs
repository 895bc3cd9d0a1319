//! Radial Dirichlet spectrum of the unit ball in `R^N` and the normalized
//! second eigenfunction with its boundary derivative data.
//!
//! The radial eigenfunctions are `phi_k(r) = C_k r^{-nu} J_nu(j_k r)` with
//! `nu = (N-2)/2` and `j_k` the k-th positive zero of `J_nu`; `C_k > 0` is
//! chosen so that the cross-sectional integral of `phi_k^2` over the unit
//! ball equals `1/(2 pi)` (the t-fiber of the reference cylinder has length
//! `2 pi`, so the cylinder integral of `phi_k^2` is exactly 1).

use crate::bessel::{self, gamma, Order, ZeroIndex};
use crate::error::{Error, Result};
use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Spectral data of the unit ball: eigenvalues `lambda_k = j_k^2`, the zeros
/// themselves, and the second-eigenfunction boundary derivatives.
///
/// Invariants established by [`ball_spectrum`]:
/// `lambda1 = j1^2 < lambda2 = j2^2`, `dphi2 > 0`, and
/// `d2phi2 = -(N-1) dphi2` (the radial ODE evaluated at `r = 1` where
/// `phi_2(1) = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallSpectrum {
    pub n: u32,
    pub nu: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub j1: f64,
    pub j2: f64,
    /// `phi_2'(1)`.
    pub dphi2: f64,
    /// `phi_2''(1)`.
    pub d2phi2: f64,
    /// Normalization constant `C_2`.
    pub norm_const: f64,
}

/// Surface measure of the unit sphere in `R^N`: `2 pi^{N/2} / Gamma(N/2)`.
/// For `N = 1` this is the two-point measure 2.
pub fn sphere_measure(n: u32) -> f64 {
    2.0 * core::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// Builds the spectrum for `1 <= N <= 12`.
pub fn ball_spectrum(n: u32) -> Result<BallSpectrum> {
    if n == 0 || n > 12 {
        return Err(Error::UnsupportedDimension(n));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let order = Order::new(nu)?;
    let j1 = bessel::bessel_zero(order, ZeroIndex::new(1)?)?;
    let j2 = bessel::bessel_zero(order, ZeroIndex::new(2)?)?;
    let norm_const = normalization_constant(n, 2)?;
    let djnu = bessel::bessel_j_prime(order, j2)?;
    // phi_2'(1) = C_2 j_2 J'_nu(j_2), differentiating C r^{-nu} J_nu(j_2 r)
    // at r = 1 where J_nu(j_2) = 0. Positivity of J'_nu at the second zero
    // is a sign convention the whole dispersion analysis rests on.
    assert!(
        djnu > 0.0,
        "sign convention violated: J'_nu(j2) = {djnu} <= 0 for N = {n}"
    );
    let dphi2 = norm_const * j2 * djnu;
    let d2phi2 = -((n as f64) - 1.0) * dphi2;
    Ok(BallSpectrum {
        n,
        nu,
        lambda1: j1 * j1,
        lambda2: j2 * j2,
        j1,
        j2,
        dphi2,
        d2phi2,
        norm_const,
    })
}

/// Normalization constant `C_k` (k = 1 or 2) from the cross-sectional
/// condition `omega_{N-1} int_0^1 phi_k^2 r^{N-1} dr = 1/(2 pi)`.
///
/// Since `phi_k^2 r^{N-1} = C_k^2 J_nu^2(j_k r) r`, the integrand is smooth
/// and is evaluated by adaptive Simpson quadrature to absolute tolerance
/// 1e-12.
pub fn normalization_constant(n: u32, k: u32) -> Result<f64> {
    if n == 0 || n > 12 {
        return Err(Error::UnsupportedDimension(n));
    }
    if k == 0 || k > 2 {
        return Err(Error::Domain(format!(
            "eigenfunction index {k} not in {{1,2}}"
        )));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let order = Order::new(nu)?;
    let j = bessel::bessel_zero(order, ZeroIndex::new(k)?)?;
    let integrand = |r: f64| -> f64 {
        if r == 0.0 {
            // J_nu^2(j r) r has limit 0 for nu > -1/2 and 2/(pi j) at nu = -1/2.
            if nu == -0.5 {
                2.0 / (core::f64::consts::PI * j)
            } else {
                0.0
            }
        } else {
            let v = bessel::bessel_j(order, j * r).expect("argument inside series range");
            v * v * r
        }
    };
    let integral = adaptive_simpson(&integrand, 0.0, 1.0, 1e-12)?;
    let c2 = 1.0 / (TWO_PI * sphere_measure(n) * integral);
    Ok(c2.sqrt())
}

/// Radial eigenfunction `phi_k(r)`, `k = 1` or `2`, on `0 <= r <= 1`.
///
/// The removable singularity at `r = 0` is filled with the series limit
/// `C_k (j_k/2)^nu / Gamma(nu+1)`.
pub fn radial_eigenfunction(spec: &BallSpectrum, k: u32, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    let (j, c) = eigenfunction_scale(spec, k)?;
    let order = Order::new(spec.nu)?;
    if r == 0.0 {
        return Ok(c * (0.5 * j).powf(spec.nu) / gamma(spec.nu + 1.0));
    }
    let val = bessel::bessel_j(order, j * r)?;
    Ok(c * r.powf(-spec.nu) * val)
}

fn eigenfunction_scale(spec: &BallSpectrum, k: u32) -> Result<(f64, f64)> {
    match k {
        2 => Ok((spec.j2, spec.norm_const)),
        1 => Ok((spec.j1, normalization_constant(spec.n, 1)?)),
        _ => Err(Error::Domain(format!(
            "eigenfunction index {k} not in {{1,2}}"
        ))),
    }
}

/// Closed-form eigenpairs for `N = 1` (cosine) and `N = 3` (sinc-type),
/// used as golden references.
#[derive(Debug, Clone, Copy)]
pub enum ClosedFormEigenfunction {
    /// `phi_k(r) = cos((2k-1) pi r / 2) / sqrt(2 pi)`.
    Interval { k: u32 },
    /// `phi_k(r) = sin(k pi r) / (2 pi r)`, value `k/2` at `r = 0`.
    Ball3 { k: u32 },
}

impl ClosedFormEigenfunction {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            ClosedFormEigenfunction::Interval { k } => {
                let freq = (2.0 * k as f64 - 1.0) * core::f64::consts::PI / 2.0;
                (freq * r).cos() / TWO_PI.sqrt()
            }
            ClosedFormEigenfunction::Ball3 { k } => {
                let freq = k as f64 * core::f64::consts::PI;
                if r == 0.0 {
                    k as f64 / 2.0
                } else {
                    (freq * r).sin() / (TWO_PI * r)
                }
            }
        }
    }
}

/// Exact eigenvalue and normalized eigenfunction for `N in {1, 3}`.
pub fn closed_form_oracle(n: u32, k: u32) -> Result<(f64, ClosedFormEigenfunction)> {
    if k == 0 {
        return Err(Error::Domain("eigenvalue index must be >= 1".into()));
    }
    let pi = core::f64::consts::PI;
    match n {
        1 => {
            let lambda = (2.0 * k as f64 - 1.0).powi(2) * pi * pi / 4.0;
            Ok((lambda, ClosedFormEigenfunction::Interval { k }))
        }
        3 => {
            let lambda = (k as f64 * pi).powi(2);
            Ok((lambda, ClosedFormEigenfunction::Ball3 { k }))
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Adaptive Simpson quadrature with interval bisection.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    if depth > 48 {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson exceeded depth 48 on [{a}, {b}]"
        )));
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        Ok(left + right + delta / 15.0)
    } else {
        let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}
