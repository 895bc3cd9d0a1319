//! Desk-scale eigensolver on perturbed cylinders `C^T_{1+v}`.
//!
//! Computes the second Dirichlet eigenvalue `lambda_{2,v}` and its
//! eigenfunction on the mapped rectangle, the boundary flux, the
//! overdetermined deviation operator `F(v,T)` (normal derivative minus its
//! boundary-measure-weighted mean), and the nodal line `r(t)`. The
//! measured `F(eps cos(k theta))/eps` against `sigma_k(T) cos(k theta)`
//! is the numerical verification of the linearization structure.
//!
//! The intended operating regime is `T` away from `delta` (there the
//! second eigenvalue of the straight cylinder degenerates with the first
//! axial harmonic of the ground state and the iteration may stall, which
//! surfaces as `Convergence`).

mod assemble;
mod linalg;

use crate::error::{Error, Result};
use crate::spectrum;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use assemble::Assembly;
use linalg::{BlockTridiagLu, DenseMat};
#[allow(unused_imports)]
use num_traits::Float;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// A perturbed-cylinder eigenproblem: dimension, period, cosine
/// coefficients of the even mean-zero boundary perturbation
/// `v(theta) = sum a_k cos(k theta)`, and grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderProblem {
    pub n_dim: u32,
    pub period: f64,
    pub v_coeffs: Vec<(u32, f64)>,
    pub n_r: usize,
    pub n_t: usize,
}

impl CylinderProblem {
    /// Straight cylinder (`v = 0`).
    pub fn straight(n_dim: u32, period: f64, n_r: usize, n_t: usize) -> CylinderProblem {
        CylinderProblem {
            n_dim,
            period,
            v_coeffs: Vec::new(),
            n_r,
            n_t,
        }
    }

    /// Single-mode perturbation `v = eps cos(k theta)`.
    pub fn single_mode(
        n_dim: u32,
        period: f64,
        k: u32,
        eps: f64,
        n_r: usize,
        n_t: usize,
    ) -> CylinderProblem {
        CylinderProblem {
            n_dim,
            period,
            v_coeffs: vec![(k, eps)],
            n_r,
            n_t,
        }
    }

    pub fn v(&self, theta: f64) -> f64 {
        self.v_coeffs
            .iter()
            .map(|&(k, a)| a * (k as f64 * theta).cos())
            .sum()
    }

    pub fn v_prime(&self, theta: f64) -> f64 {
        self.v_coeffs
            .iter()
            .map(|&(k, a)| -a * k as f64 * (k as f64 * theta).sin())
            .sum()
    }

    fn validate(&self) -> Result<()> {
        if self.n_dim == 0 || self.n_dim > 12 {
            return Err(Error::UnsupportedDimension(self.n_dim));
        }
        if !(self.period > 0.0) || !self.period.is_finite() {
            return Err(Error::Domain(format!(
                "period must be positive, got {}",
                self.period
            )));
        }
        if self.n_r < 64 {
            return Err(Error::Domain(format!("n_r = {} below minimum 64", self.n_r)));
        }
        if self.n_t < 16 || self.n_t % 2 != 0 {
            return Err(Error::Domain(format!(
                "n_t = {} must be even and at least 16",
                self.n_t
            )));
        }
        if self.n_r * self.n_t > 200_000 {
            return Err(Error::Domain(format!(
                "grid {} x {} above the desk-scale cap",
                self.n_r, self.n_t
            )));
        }
        for &(k, _) in &self.v_coeffs {
            if k == 0 {
                return Err(Error::Domain(
                    "v must be mean-zero: cosine indices start at 1".into(),
                ));
            }
            if k as usize >= self.n_t / 2 {
                return Err(Error::Domain(format!(
                    "perturbation mode {k} unresolved by n_t = {}",
                    self.n_t
                )));
            }
        }
        // Domain validity 1 + min v > 0, checked on a fine grid.
        let fine = 4 * self.n_t;
        for j in 0..fine {
            if 1.0 + self.v(TWO_PI * j as f64 / fine as f64) <= 0.0 {
                return Err(Error::Domain("domain degenerate: 1 + v <= 0".into()));
            }
        }
        Ok(())
    }
}

/// Eigenfunction values on the mapped grid, level-major:
/// `at(i, j) = u(rho_i, theta_j)` with `rho_i = i/n_r`, including the
/// boundary level `i = n_r` (identically zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    pub n_rho: usize,
    pub n_theta: usize,
    pub data: Vec<f64>,
}

impl Grid2 {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_theta + j]
    }
}

/// Solved eigenpair with the derived boundary quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolveResult {
    pub lambda2v: f64,
    pub u_grid: Grid2,
    /// `(t, normal derivative)` along the boundary, `t` the physical
    /// axial coordinate in `[0, T)`.
    pub flux: Vec<(f64, f64)>,
    /// `(theta, F(v,T)(theta))` on the `2 pi` circle.
    pub f_samples: Vec<(f64, f64)>,
    /// `(t, r(t))`: the unique interior zero radius per column.
    pub nodal_radius: Vec<(f64, f64)>,
    /// `|A u - lambda B u| / (lambda |B u|)` of the converged pair.
    pub residual_norm: f64,
}

struct ReducedSystem<'a> {
    asm: &'a Assembly,
    n_levels: usize, // interior levels (boundary eliminated)
    n_t: usize,
}

impl ReducedSystem<'_> {
    fn len(&self) -> usize {
        self.n_levels * self.n_t
    }

    fn matvec_a(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n_t;
        for v in y.iter_mut() {
            *v = 0.0;
        }
        for i in 0..self.n_levels {
            let xi = &x[i * n..(i + 1) * n];
            self.asm.diag[i].mul_add_vec(xi, &mut y[i * n..(i + 1) * n]);
            if i + 1 < self.n_levels {
                let xn = &x[(i + 1) * n..(i + 2) * n];
                self.asm.upper[i].mul_add_vec(xn, &mut y[i * n..(i + 1) * n]);
                let mut tmp = vec![0.0; n];
                self.asm.upper[i].mul_transpose_add_vec(xi, &mut tmp);
                for (yv, tv) in y[(i + 1) * n..(i + 2) * n].iter_mut().zip(tmp.iter()) {
                    *yv += tv;
                }
            }
        }
    }

    fn b_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            acc += x[i] * self.asm.b[i] * y[i];
        }
        acc
    }

    fn factor_shifted(&self, shift: f64) -> Result<BlockTridiagLu> {
        let n = self.n_t;
        let mut diag: Vec<DenseMat> = self.asm.diag[..self.n_levels].to_vec();
        for (i, block) in diag.iter_mut().enumerate() {
            for j in 0..n {
                *block.at_mut(j, j) -= shift * self.asm.b[i * n + j];
            }
        }
        BlockTridiagLu::factor(&diag, &self.asm.upper[..self.n_levels - 1])
    }
}

struct EigenPair {
    lambda: f64,
    vector: Vec<f64>,
    residual: f64,
}

/// Shift-inverted power iteration on the pencil `(A, B)` with optional
/// deflation against an already-computed eigenvector (B-orthogonal
/// Gram-Schmidt each step).
fn inverse_iteration(
    sys: &ReducedSystem,
    shift: f64,
    start: &[f64],
    deflate: Option<&EigenPair>,
    max_iter: usize,
) -> Result<EigenPair> {
    let lu = sys.factor_shifted(shift)?;
    let n = sys.len();
    let mut q = start.to_vec();
    let norm = sys.b_inner(&q, &q).sqrt();
    for v in q.iter_mut() {
        *v /= norm;
    }
    let mut z = vec![0.0; n];
    let mut aq = vec![0.0; n];
    let mut best_residual = f64::INFINITY;
    let mut last = None;
    for _ in 0..max_iter {
        // z = (A - shift B)^{-1} B q.
        for i in 0..n {
            z[i] = sys.asm.b[i] * q[i];
        }
        lu.solve(&mut z);
        if let Some(d) = deflate {
            let proj = sys.b_inner(&d.vector, &z);
            for (zv, dv) in z.iter_mut().zip(d.vector.iter()) {
                *zv -= proj * dv;
            }
        }
        let norm = sys.b_inner(&z, &z).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Convergence(
                "inverse iteration produced a degenerate vector".into(),
            ));
        }
        for v in z.iter_mut() {
            *v /= norm;
        }
        core::mem::swap(&mut q, &mut z);
        // Rayleigh quotient and eigenpair residual (q is B-normalized).
        sys.matvec_a(&q, &mut aq);
        let lambda = q.iter().zip(aq.iter()).map(|(a, b)| a * b).sum::<f64>();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            let r = aq[i] - lambda * sys.asm.b[i] * q[i];
            num += r * r;
            den += (sys.asm.b[i] * q[i]).powi(2);
        }
        let residual = (num / den).sqrt() / lambda.abs().max(f64::MIN_POSITIVE);
        if residual <= 1e-11 {
            return Ok(EigenPair {
                lambda,
                vector: q,
                residual,
            });
        }
        if residual < best_residual {
            best_residual = residual;
            last = Some((lambda, q.clone(), residual));
        }
    }
    // Roundoff can floor the residual slightly above the target; accept a
    // converged-but-not-pristine pair, refuse anything worse.
    match last {
        Some((lambda, vector, residual)) if residual <= 1e-9 => Ok(EigenPair {
            lambda,
            vector,
            residual,
        }),
        _ => Err(Error::Convergence(format!(
            "inverse iteration stalled after {max_iter} steps at shift {shift} \
             (best residual {best_residual:e})"
        ))),
    }
}

fn with_shift_retries<F>(mut attempt: F, base_shift: f64) -> Result<EigenPair>
where
    F: FnMut(f64) -> Result<EigenPair>,
{
    let mut last_err = None;
    for nudge in [1.0, 0.97, 1.03] {
        match attempt(base_shift * nudge) {
            Ok(p) => return Ok(p),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt made"))
}

/// Solves for `lambda_{2,v}` and assembles all derived quantities.
pub fn solve_lambda2(problem: &CylinderProblem) -> Result<EigenSolveResult> {
    problem.validate()?;
    let ball = spectrum::ball_spectrum(problem.n_dim)?;
    let asm = assemble::assemble(problem);
    let sys = ReducedSystem {
        asm: &asm,
        n_levels: problem.n_r,
        n_t: problem.n_t,
    };
    let n = sys.len();
    let n_t = problem.n_t;

    // Ground state: shift halfway below lambda_1 of the ball.
    let mut start1 = vec![1.0; n];
    for (idx, v) in start1.iter_mut().enumerate() {
        let j = idx % n_t;
        *v += 1e-3 * (TWO_PI * j as f64 / n_t as f64).cos();
    }
    let first = with_shift_retries(
        |s| inverse_iteration(&sys, s, &start1, None, 400),
        0.5 * ball.lambda1,
    )?;

    // Second eigenvalue: the straight-cylinder candidates are lambda_2 of
    // the ball (axially constant) and lambda_1 + (2 pi / T)^2 (first axial
    // harmonic); shift toward the smaller one and deflate the ground state.
    let axial = ball.lambda1 + (TWO_PI / problem.period).powi(2);
    let target = ball.lambda2.min(axial);
    let mut start2 = vec![0.0; n];
    for i in 0..problem.n_r {
        let rho = i as f64 / problem.n_r as f64;
        let radial = (1.5 * core::f64::consts::PI * rho).cos();
        for j in 0..n_t {
            start2[i * n_t + j] =
                radial + 1e-3 * (TWO_PI * j as f64 / n_t as f64).cos() * (1.0 - rho * rho);
        }
    }
    let mut second = with_shift_retries(
        |s| inverse_iteration(&sys, s, &start2, Some(&first), 400),
        0.9 * target,
    )?;

    // Normalize: positive mean on the axis level, unit cylinder integral
    // over the 2 pi period (omega_{N-1} restored here).
    let axis_mean: f64 = second.vector[..n_t].iter().sum::<f64>();
    let flip = if axis_mean < 0.0 { -1.0 } else { 1.0 };
    let mass = sys.b_inner(&second.vector, &second.vector)
        * spectrum::sphere_measure(problem.n_dim);
    let scale = flip / mass.sqrt();
    for v in second.vector.iter_mut() {
        *v *= scale;
    }

    // Full grid including the Dirichlet boundary level.
    let mut data = vec![0.0; (problem.n_r + 1) * n_t];
    data[..n].copy_from_slice(&second.vector);
    let u_grid = Grid2 {
        n_rho: problem.n_r + 1,
        n_theta: n_t,
        data,
    };

    let flux = boundary_flux(&u_grid, problem);
    let f_samples = deviation_from_flux(&flux, problem);
    let nodal_radius = nodal_from_grid(&u_grid, problem)?;
    Ok(EigenSolveResult {
        lambda2v: second.lambda,
        u_grid,
        flux,
        f_samples,
        nodal_radius,
        residual_norm: second.residual,
    })
}

fn boundary_flux(u: &Grid2, problem: &CylinderProblem) -> Vec<(f64, f64)> {
    let n_r = u.n_rho - 1;
    let n_t = u.n_theta;
    let h = 1.0 / n_r as f64;
    let c_ax = TWO_PI / problem.period;
    let mut out = Vec::with_capacity(n_t);
    for j in 0..n_t {
        let theta = TWO_PI * j as f64 / n_t as f64;
        let r = 1.0 + problem.v(theta);
        let rp = problem.v_prime(theta);
        // One-sided fourth-order derivative at rho = 1; u vanishes there.
        let w_rho = (25.0 * u.at(n_r, j) - 48.0 * u.at(n_r - 1, j) + 36.0 * u.at(n_r - 2, j)
            - 16.0 * u.at(n_r - 3, j)
            + 3.0 * u.at(n_r - 4, j))
            / (12.0 * h);
        // With u = 0 along the boundary, u_t = -(2 pi/T)(R'/R) w_rho there,
        // so the normal derivative collapses to
        // (w_rho / R) sqrt(1 + ((2 pi/T) R')^2).
        let slope = c_ax * rp;
        let dnu = w_rho / r * (1.0 + slope * slope).sqrt();
        out.push((problem.period * theta / TWO_PI, dnu));
    }
    out
}

fn deviation_from_flux(flux: &[(f64, f64)], problem: &CylinderProblem) -> Vec<(f64, f64)> {
    let n_t = flux.len();
    let c_ax = TWO_PI / problem.period;
    let nm1 = problem.n_dim as f64 - 1.0;
    let mut wsum = 0.0;
    let mut fsum = 0.0;
    let mut weights = Vec::with_capacity(n_t);
    for (j, &(_, f)) in flux.iter().enumerate() {
        let theta = TWO_PI * j as f64 / n_t as f64;
        let r = 1.0 + problem.v(theta);
        let rp = problem.v_prime(theta);
        let slope = c_ax * rp;
        // Boundary volume element of the perturbed cylinder:
        // sqrt(1 + ((2 pi/T) R')^2) R^{N-1} d t (angular factor constant).
        let w = (1.0 + slope * slope).sqrt() * r.powf(nm1);
        weights.push(w);
        wsum += w;
        fsum += w * f;
    }
    let mean = fsum / wsum;
    flux.iter()
        .enumerate()
        .map(|(j, &(_, f))| (TWO_PI * j as f64 / n_t as f64, f - mean))
        .collect()
}

fn nodal_from_grid(u: &Grid2, problem: &CylinderProblem) -> Result<Vec<(f64, f64)>> {
    let n_r = u.n_rho - 1;
    let n_t = u.n_theta;
    let h = 1.0 / n_r as f64;
    let mut out = Vec::with_capacity(n_t);
    for j in 0..n_t {
        let mut crossing = None;
        let mut count = 0;
        for i in 0..n_r - 1 {
            if u.at(i, j) * u.at(i + 1, j) < 0.0 {
                count += 1;
                crossing = Some(i);
            }
        }
        if count != 1 {
            return Err(Error::NodalCount { column: j, count });
        }
        let i = crossing.expect("count == 1");
        // Cubic interpolant through the four nodes around the bracket,
        // then bisection on it.
        let i0 = i.saturating_sub(1).min(n_r - 3);
        let xs = [
            i0 as f64 * h,
            (i0 + 1) as f64 * h,
            (i0 + 2) as f64 * h,
            (i0 + 3) as f64 * h,
        ];
        let ys = [u.at(i0, j), u.at(i0 + 1, j), u.at(i0 + 2, j), u.at(i0 + 3, j)];
        let eval = |x: f64| -> f64 {
            let mut acc = 0.0;
            for a in 0..4 {
                let mut term = ys[a];
                for b in 0..4 {
                    if a != b {
                        term *= (x - xs[b]) / (xs[a] - xs[b]);
                    }
                }
                acc += term;
            }
            acc
        };
        let mut lo = i as f64 * h;
        let mut hi = (i + 1) as f64 * h;
        let f_lo = eval(lo);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if eval(mid).signum() == f_lo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rho_zero = 0.5 * (lo + hi);
        let theta = TWO_PI * j as f64 / n_t as f64;
        let r = rho_zero * (1.0 + problem.v(theta));
        out.push((problem.period * theta / TWO_PI, r));
    }
    Ok(out)
}

/// Recomputes the deviation `F` from a solved eigenfunction; requires the
/// solve to have converged (`residual_norm <= 1e-6`).
pub fn neumann_deviation(
    result: &EigenSolveResult,
    problem: &CylinderProblem,
) -> Result<Vec<(f64, f64)>> {
    if result.residual_norm > 1e-6 {
        return Err(Error::Convergence(format!(
            "eigenpair residual {:e} exceeds 1e-6",
            result.residual_norm
        )));
    }
    let flux = boundary_flux(&result.u_grid, problem);
    Ok(deviation_from_flux(&flux, problem))
}

/// Recomputes the nodal line from a solved eigenfunction.
pub fn nodal_line(
    result: &EigenSolveResult,
    problem: &CylinderProblem,
) -> Result<Vec<(f64, f64)>> {
    nodal_from_grid(&result.u_grid, problem)
}

/// Discrete cosine amplitudes of samples on the uniform `2 pi` grid:
/// `values[j] ~ sum_m modes[m] cos(m theta_j)`, `m = 0..=n/2`.
pub fn cosine_modes(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = Vec::with_capacity(n / 2 + 1);
    for m in 0..=n / 2 {
        let mut acc = 0.0;
        for (j, v) in values.iter().enumerate() {
            acc += v * (TWO_PI * m as f64 * j as f64 / n as f64).cos();
        }
        let scale = if m == 0 || m == n / 2 { 1.0 } else { 2.0 };
        out.push(scale * acc / n as f64);
    }
    out
}

/// Outcome of one linearization measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationCheck {
    /// Sup-norm error of `F/eps` against `sigma_k cos(k theta)`; relative
    /// to `|sigma_k|` when `relative` is set, absolute otherwise.
    pub error: f64,
    pub relative: bool,
    pub sigma_k: f64,
    /// Cosine amplitude of mode `k` in `F/eps`.
    pub mode_amplitude: f64,
    /// All cosine amplitudes of `F/eps`.
    pub modes: Vec<f64>,
    pub lambda2v: f64,
    pub residual_norm: f64,
}

/// Solves with `v = eps cos(k theta)` and compares the measured `F/eps`
/// against the dispersion prediction `sigma_k(T) cos(k theta)`.
pub fn linearization_check(
    spec: &spectrum::BallSpectrum,
    t: f64,
    k: u32,
    eps: f64,
    n_r: usize,
    n_t: usize,
) -> Result<LinearizationCheck> {
    if !(eps != 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("eps must be nonzero, got {eps}")));
    }
    let problem = CylinderProblem::single_mode(spec.n, t, k, eps, n_r, n_t);
    let result = solve_lambda2(&problem)?;
    let sigma_k = crate::dispersion::sigma_k(spec, k, t)?;
    let ratio: Vec<f64> = result.f_samples.iter().map(|&(_, f)| f / eps).collect();
    let mut err: f64 = 0.0;
    for (j, r) in ratio.iter().enumerate() {
        let theta = TWO_PI * j as f64 / n_t as f64;
        err = err.max((r - sigma_k * (k as f64 * theta).cos()).abs());
    }
    let modes = cosine_modes(&ratio);
    let mode_amplitude = modes[k as usize];
    // Below this scale the prediction is itself ~0 (e.g. at T_*) and only
    // the absolute size of F/eps is meaningful.
    let relative = sigma_k.abs() > 1e-6 * (1.0 + spec.dphi2);
    Ok(LinearizationCheck {
        error: if relative { err / sigma_k.abs() } else { err },
        relative,
        sigma_k,
        mode_amplitude,
        modes,
        lambda2v: result.lambda2v,
        residual_norm: result.residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::ball_spectrum;

    #[test]
    fn problem_validation() {
        assert!(CylinderProblem::straight(2, 1.2, 64, 16).validate().is_ok());
        assert!(CylinderProblem::straight(0, 1.2, 64, 16).validate().is_err());
        assert!(CylinderProblem::straight(2, -1.0, 64, 16).validate().is_err());
        assert!(CylinderProblem::straight(2, 1.2, 32, 16).validate().is_err());
        assert!(CylinderProblem::straight(2, 1.2, 64, 15).validate().is_err());
        // Degenerate domain: 1 + v <= 0 somewhere.
        let p = CylinderProblem::single_mode(2, 1.2, 1, -1.1, 64, 16);
        assert!(matches!(p.validate(), Err(Error::Domain(_))));
        // Mean-zero representation excludes k = 0.
        let p = CylinderProblem {
            v_coeffs: vec![(0, 0.1)],
            ..CylinderProblem::straight(2, 1.2, 64, 16)
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn spectral_derivative_is_exact_on_modes() {
        let n = 16;
        let d1 = assemble::spectral_d1(n);
        for k in 1..n / 2 {
            let f: Vec<f64> = (0..n)
                .map(|j| (TWO_PI * k as f64 * j as f64 / n as f64).cos())
                .collect();
            let mut df = vec![0.0; n];
            d1.mul_add_vec(&f, &mut df);
            for j in 0..n {
                let want = -(k as f64) * (TWO_PI * k as f64 * j as f64 / n as f64).sin();
                assert!(
                    (df[j] - want).abs() < 1e-11,
                    "mode {k} node {j}: {} vs {want}",
                    df[j]
                );
            }
        }
        // Antisymmetry.
        for j in 0..n {
            for l in 0..n {
                assert!((d1.at(j, l) + d1.at(l, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn assembled_blocks_are_symmetric_with_measure_weights() {
        let p = CylinderProblem::single_mode(2, 1.2, 1, 0.05, 64, 16);
        let asm = assemble::assemble(&p);
        // Diagonal blocks symmetric (the full matrix, boundary level
        // included, is then symmetric since the sub-diagonal is stored as
        // the transpose of the super-diagonal).
        for d in &asm.diag {
            for j in 0..asm.n_t {
                for l in 0..asm.n_t {
                    assert!((d.at(j, l) - d.at(l, j)).abs() <= 1e-12 * d.at(j, j).abs().max(1.0));
                }
            }
        }
        // Mass weights positive.
        assert!(asm.b.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn assembled_energy_matches_direct_cell_sum() {
        let p = CylinderProblem::single_mode(3, 1.05, 2, 0.07, 64, 16);
        let asm = assemble::assemble(&p);
        let n = asm.n_levels * asm.n_t;
        let w: Vec<f64> = (0..n)
            .map(|i| {
                let level = i / asm.n_t;
                let j = i % asm.n_t;
                (0.3 + level as f64 * 0.011).sin() + 0.5 * (TWO_PI * j as f64 / 16.0).cos()
            })
            .collect();
        let mut aw = vec![0.0; n];
        asm.matvec(&w, &mut aw);
        let quad: f64 = w.iter().zip(aw.iter()).map(|(a, b)| a * b).sum();
        let direct = asm.energy_direct(&p, &w);
        assert!(
            ((quad - direct) / direct).abs() < 1e-12,
            "block form {quad} vs direct {direct}"
        );
    }

    #[test]
    fn straight_cylinder_recovers_ball_lambda2() {
        for (n, t) in [(1u32, 1.2), (2, 1.2), (3, 1.05)] {
            let ball = ball_spectrum(n).unwrap();
            let p = CylinderProblem::straight(n, t, 128, 16);
            let r = solve_lambda2(&p).unwrap();
            let rel = (r.lambda2v - ball.lambda2).abs() / ball.lambda2;
            // O(n_r^{-2}) discretization error with constant ~(j_2/12)^2-ish;
            // at n_r = 128 this is a few 1e-4.
            assert!(
                rel < 1e-3,
                "N={n}: lambda2v = {} vs {} (rel {rel:e})",
                r.lambda2v,
                ball.lambda2
            );
            assert!(r.residual_norm < 1e-9);
        }
    }

    #[test]
    fn grid_convergence_second_order() {
        let ball = ball_spectrum(3).unwrap();
        let mut errs = Vec::new();
        for n_r in [64, 128, 256] {
            let p = CylinderProblem::straight(3, 1.05, n_r, 16);
            let r = solve_lambda2(&p).unwrap();
            errs.push((r.lambda2v - ball.lambda2).abs());
        }
        let o1 = (errs[0] / errs[1]).log2();
        let o2 = (errs[1] / errs[2]).log2();
        assert!(
            (1.8..=2.2).contains(&o1) && (1.8..=2.2).contains(&o2),
            "orders {o1}, {o2} from errors {errs:?}"
        );
    }

    #[test]
    fn trivial_branch_flux_is_constant() {
        let p = CylinderProblem::straight(2, 1.2, 128, 16);
        let r = solve_lambda2(&p).unwrap();
        let ball = ball_spectrum(2).unwrap();
        let mean = r.flux.iter().map(|&(_, f)| f).sum::<f64>() / r.flux.len() as f64;
        // Flux ~ phi_2'(1) (positive since u < 0 near the boundary and
        // rises to 0).
        assert!(
            (mean - ball.dphi2).abs() < 1e-3 * ball.dphi2,
            "flux mean {mean} vs {}",
            ball.dphi2
        );
        // F(0, T) = 0 up to the discretization noise floor, measured from
        // the flux variance: the deviation never exceeds 10x that floor.
        let var = r
            .flux
            .iter()
            .map(|&(_, f)| (f - mean) * (f - mean))
            .sum::<f64>()
            / r.flux.len() as f64;
        let floor = var.sqrt();
        let fmax = r.f_samples.iter().fold(0.0f64, |m, &(_, f)| m.max(f.abs()));
        assert!(fmax <= 10.0 * floor.max(1e-12), "F max {fmax:e}, floor {floor:e}");
        assert!(fmax < 1e-9 * ball.dphi2, "trivial branch deviation {fmax:e}");
    }

    #[test]
    fn nodal_line_closed_forms_on_straight_cylinder() {
        // N=1: zero of cos(3 pi r/2) at r = 1/3; N=3: zero of sin(2 pi r)
        // at r = 1/2.
        for (n, t, want) in [(1u32, 1.2, 1.0 / 3.0), (3u32, 1.05, 0.5)] {
            let p = CylinderProblem::straight(n, t, 128, 16);
            let r = solve_lambda2(&p).unwrap();
            for &(_, rad) in &r.nodal_radius {
                assert!(
                    (rad - want).abs() < 2.0 / 128.0,
                    "N={n}: nodal radius {rad} vs {want}"
                );
            }
        }
    }

    #[test]
    fn eigenfunction_sign_structure() {
        let p = CylinderProblem::straight(2, 1.2, 128, 16);
        let r = solve_lambda2(&p).unwrap();
        let n_r = r.u_grid.n_rho - 1;
        for j in 0..r.u_grid.n_theta {
            let nodal_rho = r.nodal_radius[j].1 / 1.0; // v = 0: rho = r
            for i in 0..n_r {
                let rho = i as f64 / n_r as f64;
                let u = r.u_grid.at(i, j);
                if rho < nodal_rho - 0.02 {
                    assert!(u > 0.0, "u({rho}, {j}) = {u} should be positive");
                } else if rho > nodal_rho + 0.02 && rho < 1.0 - 1e-9 {
                    assert!(u < 0.0, "u({rho}, {j}) = {u} should be negative");
                }
            }
        }
    }

    #[test]
    fn neumann_deviation_requires_converged_pair() {
        let p = CylinderProblem::straight(2, 1.2, 64, 16);
        let mut r = solve_lambda2(&p).unwrap();
        assert!(neumann_deviation(&r, &p).is_ok());
        r.residual_norm = 1e-3;
        assert!(matches!(
            neumann_deviation(&r, &p),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn cosine_mode_extraction() {
        let n = 32;
        let vals: Vec<f64> = (0..n)
            .map(|j| {
                let th = TWO_PI * j as f64 / n as f64;
                1.5 + 0.25 * th.cos() - 0.75 * (3.0 * th).cos()
            })
            .collect();
        let modes = cosine_modes(&vals);
        assert!((modes[0] - 1.5).abs() < 1e-12);
        assert!((modes[1] - 0.25).abs() < 1e-12);
        assert!((modes[3] + 0.75).abs() < 1e-12);
        for (m, &a) in modes.iter().enumerate() {
            if ![0, 1, 3].contains(&m) {
                assert!(a.abs() < 1e-12, "spurious mode {m}: {a}");
            }
        }
    }
}
