//! Dense LU with partial pivoting and a block-tridiagonal solver for the
//! shifted systems of the cylinder eigensolver.
//!
//! The discretized operator couples each radial level only to its two
//! neighbors, with dense angular blocks from the spectral differentiation
//! matrix, so the matrix is block tridiagonal with `n_t x n_t` blocks and
//! block Thomas factorization applies. Each pivot block is factored with
//! partial pivoting; a pivot breakdown (possible in principle since the
//! shifted matrix is indefinite) surfaces as `Convergence` and callers
//! retry with a nudged shift.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(n: usize) -> DenseMat {
        DenseMat {
            n,
            a: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }

    pub fn transpose(&self) -> DenseMat {
        let mut t = DenseMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                *t.at_mut(j, i) = self.at(i, j);
            }
        }
        t
    }

    /// `y += self * x`.
    pub fn mul_add_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            let mut acc = 0.0;
            for (aij, xj) in row.iter().zip(x.iter()) {
                acc += aij * xj;
            }
            y[i] += acc;
        }
    }

    /// `y += self^T * x`.
    pub fn mul_transpose_add_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &self.a[i * self.n..(i + 1) * self.n];
            for (yj, aij) in y.iter_mut().zip(row.iter()) {
                *yj += aij * xi;
            }
        }
    }

    /// `C = self * other`.
    pub fn mul_mat(&self, other: &DenseMat) -> DenseMat {
        let n = self.n;
        let mut c = DenseMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.at(i, k);
                if aik == 0.0 {
                    continue;
                }
                let brow = &other.a[k * n..(k + 1) * n];
                let crow = &mut c.a[i * n..(i + 1) * n];
                for (cij, bkj) in crow.iter_mut().zip(brow.iter()) {
                    *cij += aik * bkj;
                }
            }
        }
        c
    }
}

/// LU factors of a dense matrix with partial pivoting.
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl DenseLu {
    pub fn factor(m: &DenseMat) -> Result<DenseLu> {
        let n = m.n;
        let mut lu = m.a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut p = col;
            let mut best = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Convergence(format!(
                    "singular pivot in block LU at column {col}"
                )));
            }
            if p != col {
                for j in 0..n {
                    lu.swap(col * n + j, p * n + j);
                }
                piv.swap(col, p);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f != 0.0 {
                    for j in col + 1..n {
                        lu[r * n + j] -= f * lu[col * n + j];
                    }
                }
            }
        }
        Ok(DenseLu { n, lu, piv })
    }

    pub fn solve_vec(&self, b: &mut [f64]) {
        let n = self.n;
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = b[self.piv[i]];
        }
        // Forward substitution with unit lower factor.
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        b.copy_from_slice(&x);
    }

    /// Solves for every column of a dense right-hand side.
    pub fn solve_mat(&self, b: &DenseMat) -> DenseMat {
        let n = self.n;
        let mut out = DenseMat::zeros(n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = b.at(i, j);
            }
            self.solve_vec(&mut col);
            for i in 0..n {
                *out.at_mut(i, j) = col[i];
            }
        }
        out
    }
}

/// Block-Thomas factorization of a symmetric block-tridiagonal matrix with
/// diagonal blocks `diag[i]` and super-diagonal blocks `upper[i]`
/// (coupling level `i` to `i+1`); the sub-diagonal is `upper[i]^T`.
pub struct BlockTridiagLu {
    pivots: Vec<DenseLu>,
    uppers: Vec<DenseMat>,
}

impl BlockTridiagLu {
    pub fn factor(diag: &[DenseMat], upper: &[DenseMat]) -> Result<BlockTridiagLu> {
        let nb = diag.len();
        debug_assert_eq!(upper.len(), nb - 1);
        let mut pivots = Vec::with_capacity(nb);
        // W_i = S_i^{-1} U_i is only needed to build the next pivot block.
        let mut w_prev: Option<DenseMat> = None;
        let mut s = diag[0].clone();
        for i in 0..nb {
            if i > 0 {
                // S_i = D_i - U_{i-1}^T W_{i-1}.
                s = diag[i].clone();
                let correction = upper[i - 1]
                    .transpose()
                    .mul_mat(w_prev.as_ref().expect("set on previous level"));
                for (sv, cv) in s.a.iter_mut().zip(correction.a.iter()) {
                    *sv -= cv;
                }
            }
            let lu = DenseLu::factor(&s)?;
            if i + 1 < nb {
                w_prev = Some(lu.solve_mat(&upper[i]));
            }
            pivots.push(lu);
        }
        Ok(BlockTridiagLu {
            pivots,
            uppers: upper.to_vec(),
        })
    }

    /// Solves in place; `x` holds the stacked block vectors.
    pub fn solve(&self, x: &mut [f64]) {
        let nb = self.pivots.len();
        let n = if nb > 0 { x.len() / nb } else { 0 };
        // Forward sweep: y_i = f_i - U_{i-1}^T S_{i-1}^{-1} y_{i-1}.
        let mut prev = vec![0.0; n];
        for i in 0..nb {
            if i > 0 {
                prev.copy_from_slice(&x[(i - 1) * n..i * n]);
                self.pivots[i - 1].solve_vec(&mut prev);
                let (head, tail) = x.split_at_mut(i * n);
                let _ = head;
                let yi = &mut tail[..n];
                let mut corr = vec![0.0; n];
                self.uppers[i - 1].mul_transpose_add_vec(&prev, &mut corr);
                for (yv, cv) in yi.iter_mut().zip(corr.iter()) {
                    *yv -= cv;
                }
            }
        }
        // Back substitution: z_{nb-1} = S^{-1} y; z_i = S_i^{-1}(y_i - U_i z_{i+1}).
        let last = nb - 1;
        self.pivots[last].solve_vec(&mut x[last * n..(last + 1) * n]);
        for i in (0..last).rev() {
            let mut corr = vec![0.0; n];
            {
                let znext = &x[(i + 1) * n..(i + 2) * n];
                self.uppers[i].mul_add_vec(znext, &mut corr);
            }
            let yi = &mut x[i * n..(i + 1) * n];
            for (yv, cv) in yi.iter_mut().zip(corr.iter()) {
                *yv -= cv;
            }
            self.pivots[i].solve_vec(&mut x[i * n..(i + 1) * n]);
        }
    }
}
