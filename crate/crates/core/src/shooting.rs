//! Independent shooting oracle for `sigma_k(T)`.
//!
//! The linearization coefficient `c_k` solves
//!
//! ```text
//! c'' + (N-1)/r c' + alpha c = 0,   alpha = lambda_2 - (2 k pi / T)^2,
//! c(1) = -phi_2'(1),   c'(0) = 0,
//! ```
//!
//! and `sigma_k(T) = c_k'(1) + phi_2''(1)`. The oracle integrates the
//! regular solution `y` (`y(0) = 1`, `y'(0) = 0`) of the same ODE with
//! fixed-step RK4 from a power-series start at `r0 = 0.01`, then rescales:
//! `c = -phi_2'(1) y / y(1)`. It never touches the Bessel-ratio formulas,
//! which is the point: agreement with [`crate::dispersion::sigma_k`] is a
//! genuine cross-check. When `y(1)` vanishes the boundary-value problem has
//! no solution (`T` resonates with `k * delta`), reported as
//! [`Error::Resonance`].

use crate::error::{Error, Result};
use crate::spectrum::BallSpectrum;
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Radius where the power-series start hands over to RK4.
pub const SERIES_START_RADIUS: f64 = 0.01;
/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-4;
/// `|y(1)| / max |y|` below this value counts as resonant.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

/// Outcome of one shoot. `resonant` is always `false` on the `Ok` path;
/// resonance is reported through [`Error::Resonance`] instead, matching the
/// non-existence statement it detects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootResult {
    /// Regular solution at `r = 1` (unit initial scale).
    pub y_at_1: f64,
    pub dy_at_1: f64,
    /// `c'(1) = -phi_2'(1) y'(1) / y(1)`.
    pub c_prime_at_1: f64,
    /// `c'(1) + phi_2''(1)`.
    pub sigma_value: f64,
    pub resonant: bool,
}

/// Dense trajectory of the regular solution, one entry per RK4 step.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub alpha: f64,
    pub rs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dys: Vec<f64>,
}

impl RadialProfile {
    pub fn y_at_1(&self) -> f64 {
        *self.ys.last().expect("profile is never empty")
    }

    pub fn max_abs_y(&self) -> f64 {
        self.ys.iter().fold(0.0f64, |m, y| m.max(y.abs()))
    }

    /// Cubic Hermite evaluation of `(y, y')` between stored nodes.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let n = self.rs.len();
        if r <= self.rs[0] {
            return (self.ys[0], self.dys[0]);
        }
        if r >= self.rs[n - 1] {
            return (self.ys[n - 1], self.dys[n - 1]);
        }
        let h = self.rs[1] - self.rs[0];
        let idx = (((r - self.rs[0]) / h) as usize).min(n - 2);
        let (r0, r1) = (self.rs[idx], self.rs[idx + 1]);
        let w = (r - r0) / (r1 - r0);
        let (y0, y1, d0, d1) = (self.ys[idx], self.ys[idx + 1], self.dys[idx], self.dys[idx + 1]);
        let h00 = (1.0 + 2.0 * w) * (1.0 - w) * (1.0 - w);
        let h10 = w * (1.0 - w) * (1.0 - w);
        let h01 = w * w * (3.0 - 2.0 * w);
        let h11 = w * w * (w - 1.0);
        let y = h00 * y0 + h10 * (r1 - r0) * d0 + h01 * y1 + h11 * (r1 - r0) * d1;
        let g00 = 6.0 * w * (w - 1.0) / (r1 - r0);
        let g10 = (3.0 * w - 1.0) * (w - 1.0);
        let g01 = -g00;
        let g11 = w * (3.0 * w - 2.0);
        let dy = g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1;
        (y, dy)
    }
}

/// Truncated even power series `y = sum a_m r^{2m}` of the regular solution,
/// `a_0 = 1`, `a_{m+1} = -alpha a_m / ((2m+2)(2m+N))`; returns `(y, y')` at
/// `r0`. The series has infinite radius of convergence; truncation stops
/// once `|a_m r0^{2m}| < 1e-16`.
pub fn series_start(spec: &BallSpectrum, alpha: f64, r0: f64) -> (f64, f64) {
    debug_assert!(r0 > 0.0 && r0 <= 0.05);
    let n = spec.n as f64;
    let mut a = 1.0f64;
    let mut y = 1.0f64;
    let mut dy = 0.0f64;
    let mut r_pow = 1.0f64; // r0^{2m}
    for m in 0..200 {
        let mf = m as f64;
        a *= -alpha / ((2.0 * mf + 2.0) * (2.0 * mf + n));
        r_pow *= r0 * r0;
        let term = a * r_pow;
        y += term;
        dy += (2.0 * mf + 2.0) * a * r_pow / r0;
        if term.abs() < 1e-16 {
            break;
        }
    }
    (y, dy)
}

/// Integrates the regular solution from `r0` to 1 and returns the dense
/// trajectory. `step` is adjusted to land exactly on `r = 1`.
pub fn shoot_profile(spec: &BallSpectrum, k: u32, t: f64, step: f64) -> Result<RadialProfile> {
    if k == 0 {
        return Err(Error::Domain("mode index k must be >= 1".into()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("period must be positive, got {t}")));
    }
    if !(step > 0.0) || step > 0.1 {
        return Err(Error::Domain(format!("step {step} outside (0, 0.1]")));
    }
    let alpha = spec.lambda2 - (2.0 * k as f64 * core::f64::consts::PI / t).powi(2);
    let r0 = SERIES_START_RADIUS;
    let n_steps = ((1.0 - r0) / step).round().max(1.0) as usize;
    let h = (1.0 - r0) / n_steps as f64;
    let nm1 = spec.n as f64 - 1.0;
    let rhs = |r: f64, y: f64, dy: f64| -> (f64, f64) { (dy, -nm1 / r * dy - alpha * y) };

    let (mut y, mut dy) = series_start(spec, alpha, r0);
    let mut rs = Vec::with_capacity(n_steps + 1);
    let mut ys = Vec::with_capacity(n_steps + 1);
    let mut dys = Vec::with_capacity(n_steps + 1);
    rs.push(r0);
    ys.push(y);
    dys.push(dy);
    for i in 0..n_steps {
        let r = r0 + i as f64 * h;
        let (k1y, k1d) = rhs(r, y, dy);
        let (k2y, k2d) = rhs(r + 0.5 * h, y + 0.5 * h * k1y, dy + 0.5 * h * k1d);
        let (k3y, k3d) = rhs(r + 0.5 * h, y + 0.5 * h * k2y, dy + 0.5 * h * k2d);
        let (k4y, k4d) = rhs(r + h, y + h * k3y, dy + h * k3d);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        rs.push(r + h);
        ys.push(y);
        dys.push(dy);
    }
    if !y.is_finite() || !dy.is_finite() {
        return Err(Error::Convergence(format!(
            "regular solution overflowed for N={}, k={k}, T={t}",
            spec.n
        )));
    }
    Ok(RadialProfile { alpha, rs, ys, dys })
}

/// Shoots `c_k` for period `t` with the default step.
pub fn shoot_c(spec: &BallSpectrum, k: u32, t: f64) -> Result<ShootResult> {
    shoot_c_with_step(spec, k, t, DEFAULT_STEP)
}

/// Shoots `c_k` with an explicit RK4 step (used by convergence-order tests).
pub fn shoot_c_with_step(spec: &BallSpectrum, k: u32, t: f64, step: f64) -> Result<ShootResult> {
    let profile = shoot_profile(spec, k, t, step)?;
    summarize(spec, t, &profile)
}

fn summarize(spec: &BallSpectrum, t: f64, profile: &RadialProfile) -> Result<ShootResult> {
    let y1 = profile.y_at_1();
    let dy1 = *profile.dys.last().expect("profile is never empty");
    let max_y = profile.max_abs_y();
    if y1.abs() < RESONANCE_THRESHOLD * max_y {
        return Err(Error::Resonance {
            t,
            y_ratio: y1.abs() / max_y,
        });
    }
    let c_prime = -spec.dphi2 * dy1 / y1;
    Ok(ShootResult {
        y_at_1: y1,
        dy_at_1: dy1,
        c_prime_at_1: c_prime,
        sigma_value: c_prime + spec.d2phi2,
        resonant: false,
    })
}

/// One mode of the Fourier synthesis `psi`.
#[derive(Debug, Clone)]
struct PsiMode {
    k: u32,
    amplitude: f64,
    profile: RadialProfile,
    y_at_1: f64,
}

/// `psi(r, t) = sum_k c_k(r) a_k cos(2 k pi t / T)`, built from shoot
/// profiles with dense output.
#[derive(Debug, Clone)]
pub struct PsiSynthesis {
    period: f64,
    dphi2: f64,
    modes: Vec<PsiMode>,
}

impl PsiSynthesis {
    /// Builds the synthesis for cosine coefficients `(k, a_k)` of `v`.
    pub fn new(spec: &BallSpectrum, modes: &[(u32, f64)], t: f64) -> Result<PsiSynthesis> {
        let mut out = Vec::with_capacity(modes.len());
        for &(k, a_k) in modes {
            let profile = shoot_profile(spec, k, t, DEFAULT_STEP)?;
            let y1 = profile.y_at_1();
            if y1.abs() < RESONANCE_THRESHOLD * profile.max_abs_y() {
                return Err(Error::Resonance {
                    t,
                    y_ratio: y1.abs() / profile.max_abs_y(),
                });
            }
            out.push(PsiMode {
                k,
                amplitude: a_k,
                profile,
                y_at_1: y1,
            });
        }
        Ok(PsiSynthesis {
            period: t,
            dphi2: spec.dphi2,
            modes: out,
        })
    }

    /// Evaluates `psi` at radius `r` and axial coordinate `t_axial`.
    pub fn eval(&self, r: f64, t_axial: f64) -> f64 {
        let mut acc = 0.0;
        for mode in &self.modes {
            let (y, _) = mode.profile.eval(r);
            let c = -self.dphi2 * y / mode.y_at_1;
            acc += c * mode.amplitude
                * (TWO_PI * mode.k as f64 * t_axial / self.period).cos();
        }
        acc
    }
}
