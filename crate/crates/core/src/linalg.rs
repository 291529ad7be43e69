//! Complex SVD by one-sided Jacobi rotations.
//!
//! nalgebra's complex bidiagonal SVD loses accuracy in the singular vectors when
//! singular values nearly coincide (reconstruction errors around 1e-2 were seen
//! on 4×4 pencil matrices), so every SVD in this crate goes through here.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::{CMatrix, Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U·diag(s)·Vᴴ` with `s` in decreasing order.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    /// `m × k` left singular vectors, `k = min(m, n)`.
    pub u: CMatrix,
    /// Singular values, decreasing.
    pub s: Vec<f64>,
    /// `n × k` right singular vectors.
    pub v: CMatrix,
}

impl Svd {
    pub(crate) fn new(a: &CMatrix) -> Result<Self> {
        let (m, n) = a.shape();
        if m < n {
            let t = jacobi(a.adjoint())?;
            return Ok(Svd { u: t.v, s: t.s, v: t.u });
        }
        jacobi(a.clone())
    }

    /// `A⁺·b`, discarding singular values at or below `rel_tol·s₀`.
    pub(crate) fn solve(&self, b: &DVector<Complex64>, rel_tol: f64) -> DVector<Complex64> {
        let cut = rel_tol * self.s.first().copied().unwrap_or(0.0);
        let mut x = DVector::zeros(self.v.nrows());
        for (i, &s) in self.s.iter().enumerate() {
            if s > cut && s > 0.0 {
                let coeff = self.u.column(i).dotc(b) / s;
                x += self.v.column(i) * coeff;
            }
        }
        x
    }

    /// `A⁺`, discarding singular values at or below `rel_tol·s₀`.
    pub(crate) fn pseudo_inverse(&self, rel_tol: f64) -> CMatrix {
        let cut = rel_tol * self.s.first().copied().unwrap_or(0.0);
        let mut p = CMatrix::zeros(self.v.nrows(), self.u.nrows());
        for (i, &s) in self.s.iter().enumerate() {
            if s > cut && s > 0.0 {
                p += (self.v.column(i) / Complex64::new(s, 0.0)) * self.u.column(i).adjoint();
            }
        }
        p
    }
}

/// `m ≥ n` only.
fn jacobi(mut u: CMatrix) -> Result<Svd> {
    let n = u.ncols();
    let mut v = CMatrix::identity(n, n);
    let eps = f64::EPSILON;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dotc(&u.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::degenerate("Jacobi SVD did not converge"));
    }
    let norms: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u_sorted = CMatrix::from_fn(u.nrows(), n, |r, c| {
        let j = order[c];
        if norms[j] > 0.0 {
            u[(r, j)] / norms[j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v_sorted = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Svd { u: u_sorted, s, v: v_sorted })
}

// Columns (p, q) ← (c·p − s·φ̄·q, s·φ·p + c·q), a unitary map that zeroes the
// inner product of the two columns of the matrix being diagonalized.
fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for r in 0..m.nrows() {
        let a = m[(r, p)];
        let b = m[(r, q)];
        m[(r, p)] = a * c - phase.conj() * b * s;
        m[(r, q)] = phase * a * s + b * c;
    }
}
