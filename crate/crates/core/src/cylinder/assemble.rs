//! Assembly of the discrete Dirichlet form and mass on the mapped
//! rectangle `(rho, theta) in [0,1] x [0, 2 pi)`.
//!
//! Coordinates: `rho = r / R(theta)` with `R = 1 + v`, `theta = 2 pi t / T`.
//! For functions radial in the cross-section the Dirichlet energy is
//!
//! ```text
//! Q[w] = int [ g_rr w_rho^2 + 2 g_rt w_rho w_theta + g_tt w_theta^2 ] J,
//!   g_rr = 1/R^2 + c^2 rho^2 (R'/R)^2,   g_rt = -c^2 rho R'/R,
//!   g_tt = c^2,   J = (rho R)^{N-1} R,   c = 2 pi / T,
//! ```
//!
//! (constant factors `omega_{N-1}` and `T/(2 pi)` drop out of the
//! eigenproblem). Discretization: piecewise-linear differences in `rho`
//! with two-point Gauss quadrature per cell, exact trigonometric
//! (collocation) first derivative in `theta`, and the uniform rule (exact
//! for trig polynomials) in `theta`. The assembled matrix is symmetric
//! with the measure weights built in; mass is row-sum lumped, so `B` is
//! diagonal. The axis `rho = 0` needs no boundary condition: for `N >= 2`
//! the weight `J` vanishes there and for `N = 1` the natural (even
//! reflection) condition is exactly the radial symmetry class the ball
//! spectrum lives in.

use super::linalg::DenseMat;
use super::CylinderProblem;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Spectral first-derivative collocation matrix on `n` uniform nodes of
/// the `2 pi` circle (`n` even). Built by direct mode summation
/// `D1[j][l] = (2/n) sum_{k=1}^{n/2-1} k sin(k (theta_l - theta_j))`;
/// exact for trigonometric polynomials below the Nyquist mode, whose
/// derivative is conventionally zeroed.
pub fn spectral_d1(n: usize) -> DenseMat {
    let mut d = DenseMat::zeros(n);
    let h = TWO_PI / n as f64;
    for j in 0..n {
        for l in 0..n {
            if j == l {
                continue;
            }
            let dt = (l as f64 - j as f64) * h;
            let mut acc = 0.0;
            for k in 1..n / 2 {
                acc += k as f64 * (k as f64 * dt).sin();
            }
            *d.at_mut(j, l) = 2.0 / n as f64 * acc;
        }
    }
    d
}

/// Everything the eigensolver needs: block-tridiagonal `A` (diagonal
/// blocks `diag[i]`, super-diagonal `upper[i]`, sub-diagonal implied by
/// symmetry) over radial levels `i = 0..=n_r`, and the diagonal lumped
/// mass `b`. The Dirichlet level `i = n_r` is still present here
/// ("before boundary elimination"); the solver works on the leading
/// `n_r` levels.
pub struct Assembly {
    pub n_levels: usize,
    pub n_t: usize,
    pub diag: Vec<DenseMat>,
    pub upper: Vec<DenseMat>,
    /// Lumped mass per node, stacked level-major like the unknowns.
    pub b: Vec<f64>,
    pub d1: DenseMat,
}

/// Metric coefficients `a = J g_rr`, `b = J g_rt`, `c = J g_tt` and the
/// plain weight `J` at one quadrature point.
fn coefficients(problem: &CylinderProblem, rho: f64, theta: f64) -> (f64, f64, f64, f64) {
    let n = problem.n_dim as f64;
    let c_ax = TWO_PI / problem.period;
    let r = 1.0 + problem.v(theta);
    let rp = problem.v_prime(theta);
    let bv = rp / r;
    let jac = (rho * r).powf(n - 1.0) * r;
    let g_rr = 1.0 / (r * r) + c_ax * c_ax * rho * rho * bv * bv;
    let g_rt = -c_ax * c_ax * rho * bv;
    let g_tt = c_ax * c_ax;
    (jac * g_rr, jac * g_rt, jac * g_tt, jac)
}

/// Gauss points of the reference cell `[0, 1]`.
const GAUSS: [f64; 2] = [
    0.5 - 0.288_675_134_594_812_9, // 0.5 - 1/(2 sqrt(3))
    0.5 + 0.288_675_134_594_812_9,
];

pub fn assemble(problem: &CylinderProblem) -> Assembly {
    let n_r = problem.n_r;
    let n_t = problem.n_t;
    let h = 1.0 / n_r as f64;
    let h_t = TWO_PI / n_t as f64;
    let d1 = spectral_d1(n_t);

    let mut diag = vec![DenseMat::zeros(n_t); n_r + 1];
    let mut upper = vec![DenseMat::zeros(n_t); n_r];
    let mut b = vec![0.0; (n_r + 1) * n_t];

    let mut av = vec![0.0; n_t];
    let mut bv = vec![0.0; n_t];
    let mut cv = vec![0.0; n_t];
    let mut x = DenseMat::zeros(n_t);
    let mut y = DenseMat::zeros(n_t);
    for cell in 0..n_r {
        let (lo, hi) = (cell, cell + 1);
        for &wg in GAUSS.iter() {
            let rho_g = (cell as f64 + wg) * h;
            let (alpha, beta) = (1.0 - wg, wg); // P1 shape values at the point
            for j in 0..n_t {
                let theta = j as f64 * h_t;
                let (a, bb, c, jac) = coefficients(problem, rho_g, theta);
                av[j] = a;
                bv[j] = bb;
                cv[j] = c;
                // Row-sum lumped mass: node weights are the P1 shapes.
                let w = 0.5 * h * h_t * jac;
                b[lo * n_t + j] += alpha * w;
                b[hi * n_t + j] += beta * w;
            }
            // X = diag(b) D1 and Y = (h h_t / 2) D1^T diag(c) D1 at this
            // Gauss point (half weight each).
            for j in 0..n_t {
                for l in 0..n_t {
                    *x.at_mut(j, l) = bv[j] * d1.at(j, l);
                }
            }
            for j in 0..n_t {
                for l in 0..n_t {
                    let mut acc = 0.0;
                    for m in 0..n_t {
                        acc += d1.at(m, j) * cv[m] * d1.at(m, l);
                    }
                    *y.at_mut(j, l) = 0.5 * h * h_t * acc;
                }
            }
            // Radial difference d = (w_hi - w_lo)/h (constant in rho),
            // angular derivative e = alpha D1 w_lo + beta D1 w_hi.
            let rr = 0.5 * h_t / h;
            for j in 0..n_t {
                for l in 0..n_t {
                    let sym_x = 0.25 * h_t * (x.at(j, l) + x.at(l, j));
                    let p = if j == l { rr * av[j] } else { 0.0 };
                    let yv = y.at(j, l);
                    // Q contributions per Gauss point:
                    //   d^2:     p ((lo,lo) + (hi,hi)) - p (lo,hi)
                    //   2 d e:   -2 alpha sym(X) (lo,lo) + 2 beta sym(X) (hi,hi)
                    //            + (alpha X^T - beta X) (lo,hi)
                    //   e^2:     alpha^2 Y (lo,lo) + beta^2 Y (hi,hi)
                    //            + alpha beta Y (lo,hi)
                    *diag[lo].at_mut(j, l) += p - 2.0 * alpha * sym_x + alpha * alpha * yv;
                    *diag[hi].at_mut(j, l) += p + 2.0 * beta * sym_x + beta * beta * yv;
                    *upper[lo].at_mut(j, l) += -p
                        + 0.5 * h_t * (alpha * x.at(l, j) - beta * x.at(j, l))
                        + alpha * beta * yv;
                }
            }
        }
    }
    Assembly {
        n_levels: n_r + 1,
        n_t,
        diag,
        upper,
        b,
        d1,
    }
}

impl Assembly {
    /// `y = A x` over all levels (including the boundary level).
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n_t;
        for v in y.iter_mut() {
            *v = 0.0;
        }
        for i in 0..self.n_levels {
            let xi = &x[i * n..(i + 1) * n];
            self.diag[i].mul_add_vec(xi, &mut y[i * n..(i + 1) * n]);
            if i + 1 < self.n_levels {
                let xnext = &x[(i + 1) * n..(i + 2) * n];
                self.upper[i].mul_add_vec(xnext, &mut y[i * n..(i + 1) * n]);
                let mut tmp = vec![0.0; n];
                self.upper[i].mul_transpose_add_vec(xi, &mut tmp);
                for (yv, tv) in y[(i + 1) * n..(i + 2) * n].iter_mut().zip(tmp.iter()) {
                    *yv += tv;
                }
            }
        }
    }

    /// Direct evaluation of the quadratic form from the cell sums, used to
    /// cross-check the assembled blocks.
    #[cfg(test)]
    pub fn energy_direct(&self, problem: &CylinderProblem, w: &[f64]) -> f64 {
        let n_r = problem.n_r;
        let n_t = problem.n_t;
        let h = 1.0 / n_r as f64;
        let h_t = TWO_PI / n_t as f64;
        let mut q = 0.0;
        for cell in 0..n_r {
            let lo = &w[cell * n_t..(cell + 1) * n_t];
            let hi = &w[(cell + 1) * n_t..(cell + 2) * n_t];
            let mut e_lo = vec![0.0; n_t];
            let mut e_hi = vec![0.0; n_t];
            self.d1.mul_add_vec(lo, &mut e_lo);
            self.d1.mul_add_vec(hi, &mut e_hi);
            for &wg in GAUSS.iter() {
                let rho_g = (cell as f64 + wg) * h;
                for j in 0..n_t {
                    let theta = j as f64 * h_t;
                    let (a, b, c, _) = coefficients(problem, rho_g, theta);
                    let d = (hi[j] - lo[j]) / h;
                    let e = (1.0 - wg) * e_lo[j] + wg * e_hi[j];
                    q += 0.5 * h * h_t * (a * d * d + 2.0 * b * d * e + c * e * e);
                }
            }
        }
        q
    }
}
