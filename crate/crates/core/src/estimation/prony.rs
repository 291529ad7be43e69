use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Classical Prony / annihilating-filter estimate of the poles of
/// `p[k] = Σ cℓ·uℓ^k`.
///
/// Finds the monic filter `h` with `Σ_{i=0}^{L} h[i]·p[k − i] = 0` for
/// `k = L, …, N−1` by Householder least squares, then returns the roots of
/// `z^L + h[1]·z^{L−1} + … + h[L]` (Aberth iteration). Deliberately shares no
/// code with the matrix pencil so the two can cross-check each other.
///
/// # Errors
///
/// [`Error::InsufficientData`] when `N < 2L`, [`Error::InvalidParameter`] for
/// `L = 0`, [`Error::Degenerate`] when the annihilation system is singular.
pub fn prony_oracle(sequence: &[Complex64], l: usize) -> Result<Vec<Complex64>> {
    let n = sequence.len();
    if l == 0 {
        return Err(Error::invalid("model order L must be at least 1"));
    }
    if n < 2 * l {
        return Err(Error::InsufficientData { required: 2 * l, available: n });
    }
    // rows k = L..N−1: Σ_{i=1}^{L} h[i]·p[k−i] = −p[k]
    let rows = n - l;
    let mut a: Vec<Vec<Complex64>> = (0..rows).map(|r| (1..=l).map(|i| sequence[r + l - i]).collect()).collect();
    let mut b: Vec<Complex64> = (0..rows).map(|r| -sequence[r + l]).collect();
    let h = householder_solve(&mut a, &mut b, l)?;
    let mut coeffs = Vec::with_capacity(l + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    coeffs.extend(h);
    aberth_roots(&coeffs)
}

// Least-squares solution of the `rows × cols` system by Householder QR.
#[allow(clippy::needless_range_loop)]
fn householder_solve(a: &mut [Vec<Complex64>], b: &mut [Complex64], cols: usize) -> Result<Vec<Complex64>> {
    let rows = a.len();
    let scale = a.iter().flat_map(|r| r.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::degenerate("annihilation system is zero"));
    }
    for j in 0..cols {
        let norm = (j..rows).map(|r| a[r][j].norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale {
            return Err(Error::degenerate("annihilation system is singular"));
        }
        let x0 = a[j][j];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        // v = x − α·e1, reflector I − 2vvᴴ/(vᴴv)
        let mut v: Vec<Complex64> = (j..rows).map(|r| a[r][j]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..cols {
            let dot: Complex64 = v.iter().zip(j..rows).map(|(vi, r)| vi.conj() * a[r][c]).sum();
            let f = dot * (2.0 / vnorm2);
            for (vi, r) in v.iter().zip(j..rows) {
                a[r][c] -= f * vi;
            }
        }
        let dot: Complex64 = v.iter().zip(j..rows).map(|(vi, r)| vi.conj() * b[r]).sum();
        let f = dot * (2.0 / vnorm2);
        for (vi, r) in v.iter().zip(j..rows) {
            b[r] -= f * vi;
        }
    }
    let mut x = alloc::vec![Complex64::new(0.0, 0.0); cols];
    for j in (0..cols).rev() {
        let mut s = b[j];
        for c in j + 1..cols {
            s -= a[j][c] * x[c];
        }
        x[j] = s / a[j][j];
    }
    Ok(x)
}

// Roots of the monic polynomial c[0]·z^d + … + c[d] (c[0] = 1).
fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    if d == 1 {
        return Ok(alloc::vec![-c[1]]);
    }
    let radius = 1.0 + c[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(0.5 * radius, 2.0 * core::f64::consts::PI * i as f64 / d as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut p = c[0];
        let mut dp = Complex64::new(0.0, 0.0);
        for coef in &c[1..] {
            dp = dp * x + p;
            p = p * x + coef;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    // two Newton polishing steps
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = eval(*zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(Error::degenerate("annihilating filter roots did not converge"));
    }
    Ok(z)
}
