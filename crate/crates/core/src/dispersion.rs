//! The dispersion function `sigma(T) = sigma_1(T)`, its scalings
//! `sigma_k(T) = sigma(T/k)`, its derivative, and the structural constants
//! `mu = 2 pi / sqrt(lambda_2)` and `delta = 2 pi / sqrt(lambda_2 - lambda_1)`.
//!
//! `sigma` is evaluated exclusively in the `phi_2'(1)/phi_2''(1)` form
//!
//! ```text
//! sigma(T) = phi_2''(1) - phi_2'(1) * xi I_{nu+1}(xi)/I_nu(xi)   (T < mu)
//! sigma(mu) = phi_2''(1) = -(2 nu + 1) phi_2'(1)
//! sigma(T) = phi_2''(1) + phi_2'(1) * rho J_{nu+1}(rho)/J_nu(rho) (T > mu)
//! ```
//!
//! with `xi = sqrt((2 pi/T)^2 - lambda_2)` and
//! `rho = sqrt(lambda_2 - (2 pi/T)^2)`. The only singular point is
//! `T = delta`, where `rho` hits the first zero of `J_nu`; evaluation
//! within a relative margin of `delta` is refused.

use crate::bessel::{self, Order};
use crate::error::{Error, Result};
use crate::spectrum::BallSpectrum;
use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Relative margin around `delta` inside which evaluation is refused.
pub const DELTA_MARGIN: f64 = 1e-9;

/// Radicand threshold below which `T` is treated as exactly `mu` and the
/// analytic limit values are used instead of the degenerate ratio forms.
const AT_MU_THRESHOLD: f64 = 1e-12;

/// Structural constants of the dispersion function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructuralConstants {
    /// `2 pi / sqrt(lambda_2)`; `sigma` switches branch here.
    pub mu: f64,
    /// `2 pi / sqrt(lambda_2 - lambda_1)`; the unique singular point.
    pub delta: f64,
}

/// Which branch of the dispersion function a point was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Subcritical,
    AtMu,
    Supercritical,
}

impl Branch {
    /// Short stable token used in CSV output.
    pub fn token(self) -> &'static str {
        match self {
            Branch::Subcritical => "sub",
            Branch::AtMu => "mu",
            Branch::Supercritical => "super",
        }
    }
}

/// One evaluation of `sigma`: the period, the value, the branch, and the
/// auxiliary argument (`xi` below `mu`, `rho` above, 0 at `mu`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint {
    pub t: f64,
    pub sigma: f64,
    pub branch: Branch,
    pub arg: f64,
}

/// `mu = 2 pi / j_2` and `delta = 2 pi / sqrt(j_2^2 - j_1^2)`; always
/// `mu < delta`.
pub fn structural_constants(spec: &BallSpectrum) -> StructuralConstants {
    StructuralConstants {
        mu: TWO_PI / spec.j2,
        delta: TWO_PI / (spec.lambda2 - spec.lambda1).sqrt(),
    }
}

fn guard_t(spec: &BallSpectrum, t: f64) -> Result<StructuralConstants> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("period must be positive, got {t}")));
    }
    let sc = structural_constants(spec);
    if (t - sc.delta).abs() <= DELTA_MARGIN * sc.delta {
        return Err(Error::SingularPoint { t, delta: sc.delta });
    }
    Ok(sc)
}

/// Evaluates `sigma(T)` with branch bookkeeping.
pub fn sigma(spec: &BallSpectrum, t: f64) -> Result<DispersionPoint> {
    let _ = guard_t(spec, t)?;
    let nu = Order::new(spec.nu)?;
    let q = (TWO_PI / t).powi(2) - spec.lambda2;
    if q.abs() <= AT_MU_THRESHOLD * spec.lambda2 {
        // At mu both ratio arguments degenerate to 0; the limit of the
        // ratio terms is 0, leaving sigma(mu) = phi_2''(1).
        return Ok(DispersionPoint {
            t,
            sigma: spec.d2phi2,
            branch: Branch::AtMu,
            arg: 0.0,
        });
    }
    if q > 0.0 {
        let xi = q.sqrt();
        let f = bessel::ratio_f(nu, xi)?;
        Ok(DispersionPoint {
            t,
            sigma: spec.d2phi2 - spec.dphi2 * f,
            branch: Branch::Subcritical,
            arg: xi,
        })
    } else {
        let rho = (-q).sqrt();
        let h = match bessel::ratio_h(nu, rho) {
            Ok(h) => h,
            // A pole of h at rho = sqrt(lambda_1) is the delta singularity.
            Err(Error::Pole(_)) => {
                let sc = structural_constants(spec);
                return Err(Error::SingularPoint { t, delta: sc.delta });
            }
            Err(e) => return Err(e),
        };
        Ok(DispersionPoint {
            t,
            sigma: spec.d2phi2 + spec.dphi2 * h,
            branch: Branch::Supercritical,
            arg: rho,
        })
    }
}

/// `sigma_k(T) = sigma(T/k)`.
pub fn sigma_k(spec: &BallSpectrum, k: u32, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("mode index k must be >= 1".into()));
    }
    Ok(sigma(spec, t / k as f64)?.sigma)
}

/// Exact piecewise closed form for `N = 1`, with
/// `alpha(T) = 9 pi^2/4 - (2 pi/T)^2`:
///
/// ```text
/// sigma(T) = -(3 sqrt(2 pi)/4) sqrt(-alpha) tanh(sqrt(-alpha))   T < 4/3
/// sigma(4/3) = 0
/// sigma(T) =  (3 sqrt(2 pi)/4) sqrt(alpha)  tan(sqrt(alpha))     T > 4/3
/// ```
pub fn sigma_closed_form_1d(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("period must be positive, got {t}")));
    }
    let delta = core::f64::consts::SQRT_2;
    if (t - delta).abs() <= DELTA_MARGIN * delta {
        return Err(Error::SingularPoint { t, delta });
    }
    let coeff = 0.75 * TWO_PI.sqrt();
    let alpha = 2.25 * core::f64::consts::PI.powi(2) - (TWO_PI / t).powi(2);
    if alpha.abs() <= AT_MU_THRESHOLD {
        return Ok(0.0);
    }
    if alpha < 0.0 {
        let x = (-alpha).sqrt();
        Ok(-coeff * x * x.tanh())
    } else {
        let x = alpha.sqrt();
        Ok(coeff * x * x.tan())
    }
}

/// `sigma'(T)` in closed Bessel form:
///
/// * `T < mu`: `4 pi^2 phi_2'(1) (I_nu^2 - I_{nu-1} I_{nu+1}) / (T^3 I_nu^2)`
///   at `xi(T)` (scaled `I` values; the exponential factors cancel),
/// * `T = mu`: `(4 pi^2 phi_2'(1) / mu^3) / (nu + 1)`,
/// * `T > mu`: the analogous `J` form at `rho(T)`.
pub fn sigma_prime(spec: &BallSpectrum, t: f64) -> Result<f64> {
    let _ = guard_t(spec, t)?;
    let pref = 4.0 * core::f64::consts::PI.powi(2) * spec.dphi2 / t.powi(3);
    let q = (TWO_PI / t).powi(2) - spec.lambda2;
    if q.abs() <= AT_MU_THRESHOLD * spec.lambda2 {
        return Ok(pref / (spec.nu + 1.0));
    }
    let nu_m = Order::new(spec.nu - 1.0)?;
    let nu_0 = Order::new(spec.nu)?;
    let nu_p = Order::new(spec.nu + 1.0)?;
    if q > 0.0 {
        let xi = q.sqrt();
        let im = bessel::bessel_i_scaled(nu_m, xi)?;
        let i0 = bessel::bessel_i_scaled(nu_0, xi)?;
        let ip = bessel::bessel_i_scaled(nu_p, xi)?;
        Ok(pref * (i0 * i0 - im * ip) / (i0 * i0))
    } else {
        let rho = (-q).sqrt();
        let jm = bessel::bessel_j(nu_m, rho)?;
        let j0 = bessel::bessel_j(nu_0, rho)?;
        let jp = bessel::bessel_j(nu_p, rho)?;
        if j0.abs() < bessel::POLE_MARGIN * jm.abs().max(jp.abs()).max(1.0) {
            let sc = structural_constants(spec);
            return Err(Error::SingularPoint { t, delta: sc.delta });
        }
        Ok(pref * (j0 * j0 - jm * jp) / (j0 * j0))
    }
}
