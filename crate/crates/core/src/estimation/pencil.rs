use alloc::vec::Vec;

use nalgebra::Schur;
use num_complex::Complex64;

use crate::linalg::Svd;
use crate::{CMatrix, Error, Result};

/// Relative singular-value threshold below which the signal subspace is taken to
/// have collapsed.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Matrix-pencil estimate of the `L` poles `u` of `p[k] = Σ cℓ·uℓ^k`,
/// `k = 0, …, N−1`.
///
/// The Hankel matrix `H[r, c] = p[r + c]` of `pencil_param + 1` columns is reduced
/// to its `L` dominant right singular vectors `W`; the poles are the eigenvalues
/// of `W₀⁺·W₁`, where `W₀` and `W₁` drop the last and the first row.
///
/// # Errors
///
/// [`Error::InsufficientData`] when `N < 2L`, [`Error::InvalidParameter`] for
/// `L = 0` or `pencil_param ∉ [L, N − L]`, and [`Error::Degenerate`] when
/// `σ_L/σ_1 < 10⁻¹²` (fewer than `L` exponentials present).
pub fn matrix_pencil_1d(sequence: &[Complex64], l: usize, pencil_param: usize) -> Result<Vec<Complex64>> {
    let n = sequence.len();
    if l == 0 {
        return Err(Error::invalid("model order L must be at least 1"));
    }
    if n < 2 * l {
        return Err(Error::InsufficientData { required: 2 * l, available: n });
    }
    if pencil_param < l || pencil_param > n - l {
        return Err(Error::invalid(alloc::format!(
            "pencil parameter {pencil_param} outside [{l}, {}]",
            n - l
        )));
    }
    let m = pencil_param;
    let h = CMatrix::from_fn(n - m, m + 1, |r, c| sequence[r + c]);
    let (w, sv) = signal_subspace(h, l)?;
    if sv.len() < l || sv[l - 1] < RANK_TOLERANCE * sv[0] {
        return Err(Error::degenerate(alloc::format!(
            "sequence carries fewer than {l} exponentials (σ_L/σ_1 = {:.3e})",
            sv.get(l - 1).copied().unwrap_or(0.0) / sv[0]
        )));
    }
    shift_invariance_poles(&w)
}

/// Leading right singular vectors of `h` as columns spanning its row space,
/// together with all singular values in decreasing order. At most `l` vectors
/// are returned.
pub(crate) fn signal_subspace(h: CMatrix, l: usize) -> Result<(CMatrix, Vec<f64>)> {
    let svd = Svd::new(&h)?;
    let sv = svd.s;
    if sv.is_empty() || !(sv[0] > 0.0) {
        return Err(Error::degenerate("all measurements are zero"));
    }
    let k = l.min(sv.len());
    // the rows of H are combinations of the conjugated right singular vectors
    let w = CMatrix::from_fn(svd.v.nrows(), k, |r, c| svd.v[(r, c)].conj());
    Ok((w, sv))
}

/// Eigenvalues of `W₀⁺·W₁` for a basis `W` of a shift-invariant subspace.
pub(crate) fn shift_invariance_poles(w: &CMatrix) -> Result<Vec<Complex64>> {
    let rows = w.nrows();
    let w0 = w.rows(0, rows - 1).into_owned();
    let w1 = w.rows(1, rows - 1).into_owned();
    let f = Svd::new(&w0)?.pseudo_inverse(0.0) * w1;
    let schur = Schur::try_new(f, f64::EPSILON, 10_000).ok_or_else(|| Error::degenerate("pencil eigenvalues did not converge"))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}
