use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::SeparableSmsKernel;
use crate::linalg::Svd;
use crate::{Axis, CMatrix, Error, IndexRange, Result};

/// Shifts, sampling steps and evaluation region for [`reproduce_exponential`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionSetup {
    /// Shift step along `x`.
    pub tsx: f64,
    /// Shift step along `y`.
    pub tsy: f64,
    /// Available shifts `n1` (kernel copies centred at `n1·Tsx`).
    pub shifts_x: IndexRange,
    /// Available shifts `n2`.
    pub shifts_y: IndexRange,
    /// Evaluation interval `[x0, x1]`.
    pub region_x: [f64; 2],
    /// Evaluation interval `[y0, y1]`.
    pub region_y: [f64; 2],
    /// Number of equispaced evaluation points per axis.
    pub points_per_axis: usize,
}

impl ReproductionSetup {
    /// Critical steps `Ts = T0/|K|`, region `[−T0/2, T0/2]` on each axis, and the
    /// shifts needed to cover it plus one spare on each side.
    pub fn critical(kernel: &SeparableSmsKernel) -> Self {
        let g = kernel.grid();
        let tsx = g.t0x() / g.k1().len() as f64;
        let tsy = g.t0y() / g.k2().len() as f64;
        let (hx, hy) = kernel.support_half_widths();
        let rx = [-0.5 * g.t0x(), 0.5 * g.t0x()];
        let ry = [-0.5 * g.t0y(), 0.5 * g.t0y()];
        let sx = needed_shifts(rx, hx, tsx);
        let sy = needed_shifts(ry, hy, tsy);
        let spare = |r: IndexRange| IndexRange::new(r.min() - 1, r.max() + 1).expect("nonempty");
        let points = 4 * sx.len().max(sy.len()) + 1;
        Self {
            tsx,
            tsy,
            shifts_x: spare(sx),
            shifts_y: spare(sy),
            region_x: rx,
            region_y: ry,
            points_per_axis: points,
        }
    }
}

/// Least-squares reproduction of a modulated monomial by shifted kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionFit {
    /// Coefficients `c[n1, n2]` over the full shift ranges (rows `n1`); shifts
    /// that never reach the region are zero.
    pub coeffs: CMatrix,
    /// `‖Σ c·g(x − n1Tsx, y − n2Tsy) − target‖ / ‖target‖` on the evaluation grid.
    pub relative_residual: f64,
}

fn needed_shifts(region: [f64; 2], half: f64, ts: f64) -> IndexRange {
    let lo = ((region[0] - half) / ts - 1e-9).ceil() as i32;
    let hi = ((region[1] + half) / ts + 1e-9).floor() as i32;
    IndexRange::new(lo, hi).expect("region has positive length")
}

/// Fits `(x/Tsx)^i·(y/Tsy)^j·e^{j(k1Ω0x x + k2Ω0y y)}` on the evaluation region by
/// `Σ_{n1,n2} c[n1,n2]·g_S(x − n1·Tsx, y − n2·Tsy)`.
///
/// Kernel copies are shifted by whole sampling steps. The target and the kernel
/// are separable, so the coefficients are the outer product of two 1-D
/// least-squares solutions; the residual is measured on the 2-D evaluation grid.
/// Degrees up to `i = r1`, `j = r2` are accepted; exact reproduction is only
/// expected up to `r1 − 1`, `r2 − 1`.
///
/// # Errors
///
/// [`Error::InvalidParameter`] when `k1 ∉ K1`, `k2 ∉ K2`, a degree exceeds the
/// spline order, a step or region is degenerate, the shifts do not reach one
/// support width beyond the region, or there are fewer points than shifts.
pub fn reproduce_exponential(
    kernel: &SeparableSmsKernel,
    i: u32,
    j: u32,
    k1: i32,
    k2: i32,
    setup: &ReproductionSetup,
) -> Result<ReproductionFit> {
    let g = kernel.grid();
    if !g.k1().contains(k1) || !g.k2().contains(k2) {
        return Err(Error::invalid(alloc::format!("({k1}, {k2}) is not on the spectral grid")));
    }
    if i > kernel.r1() || j > kernel.r2() {
        return Err(Error::invalid(alloc::format!(
            "degrees ({i}, {j}) exceed the spline orders ({}, {})",
            kernel.r1(),
            kernel.r2()
        )));
    }
    if !(setup.tsx > 0.0 && setup.tsy > 0.0) {
        return Err(Error::invalid("shift steps must be positive"));
    }
    for r in [setup.region_x, setup.region_y] {
        if !(r[1] > r[0]) {
            return Err(Error::invalid("evaluation region must have positive length"));
        }
    }
    let (hx, hy) = kernel.support_half_widths();
    let cols_x = needed_shifts(setup.region_x, hx, setup.tsx);
    let cols_y = needed_shifts(setup.region_y, hy, setup.tsy);
    for (axis, need, have) in [(Axis::X, cols_x, setup.shifts_x), (Axis::Y, cols_y, setup.shifts_y)] {
        if need.min() < have.min() || need.max() > have.max() {
            return Err(Error::invalid(alloc::format!(
                "shift range ⟦{}, {}⟧ along {axis} does not reach one support width beyond the evaluation region (needs ⟦{}, {}⟧)",
                have.min(),
                have.max(),
                need.min(),
                need.max()
            )));
        }
    }
    let n = setup.points_per_axis;
    if n < cols_x.len().max(cols_y.len()) {
        return Err(Error::invalid(alloc::format!(
            "{n} evaluation points per axis cannot determine {} shift coefficients",
            cols_x.len().max(cols_y.len())
        )));
    }

    let xs = linspace(setup.region_x, n);
    let ys = linspace(setup.region_y, n);
    let tx: Vec<Complex64> =
        xs.iter().map(|&x| Complex64::from_polar((x / setup.tsx).powi(i as i32), k1 as f64 * g.omega0x() * x)).collect();
    let ty: Vec<Complex64> =
        ys.iter().map(|&y| Complex64::from_polar((y / setup.tsy).powi(j as i32), k2 as f64 * g.omega0y() * y)).collect();
    let ax = CMatrix::from_fn(n, cols_x.len(), |p, c| kernel.axis_x(xs[p] - (cols_x.min() + c as i32) as f64 * setup.tsx));
    let ay = CMatrix::from_fn(n, cols_y.len(), |p, c| kernel.axis_y(ys[p] - (cols_y.min() + c as i32) as f64 * setup.tsy));
    let cx = least_squares(ax.clone(), &tx)?;
    let cy = least_squares(ay.clone(), &ty)?;

    let mx = &ax * &cx;
    let my = &ay * &cy;
    let mut num = 0.0;
    let mut den = 0.0;
    for p in 0..n {
        for q in 0..n {
            let target = tx[p] * ty[q];
            num += (mx[p] * my[q] - target).norm_sqr();
            den += target.norm_sqr();
        }
    }

    let mut coeffs = CMatrix::zeros(setup.shifts_x.len(), setup.shifts_y.len());
    for (a, n1) in cols_x.iter().enumerate() {
        for (b, n2) in cols_y.iter().enumerate() {
            coeffs[(setup.shifts_x.offset(n1), setup.shifts_y.offset(n2))] = cx[a] * cy[b];
        }
    }
    Ok(ReproductionFit { coeffs, relative_residual: (num / den).sqrt() })
}

fn linspace(r: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![0.5 * (r[0] + r[1])];
    }
    (0..n).map(|p| r[0] + (r[1] - r[0]) * p as f64 / (n - 1) as f64).collect()
}

fn least_squares(a: CMatrix, b: &[Complex64]) -> Result<DVector<Complex64>> {
    let rhs = DVector::from_column_slice(b);
    Ok(Svd::new(&a)?.solve(&rhs, 1e-14))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SpectralGrid;
    use core::f64::consts::PI;

    fn kernel(r: u32, half: u32) -> SeparableSmsKernel {
        SeparableSmsKernel::new(SpectralGrid::symmetric(half, half, 2.0 * PI, 2.0 * PI).unwrap(), r, r).unwrap()
    }

    #[test]
    fn constant_by_box_kernel() {
        let k = kernel(1, 0);
        let s = ReproductionSetup::critical(&k);
        let fit = reproduce_exponential(&k, 0, 0, 0, 0, &s).unwrap();
        assert!(fit.relative_residual < 1e-12, "{}", fit.relative_residual);
    }

    #[test]
    fn modulated_exponentials() {
        let k = kernel(2, 2);
        let s = ReproductionSetup::critical(&k);
        for k1 in -2..=2 {
            let fit = reproduce_exponential(&k, 1, 0, k1, -1, &s).unwrap();
            assert!(fit.relative_residual < 1e-8, "{k1}: {}", fit.relative_residual);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = kernel(2, 1);
        let mut s = ReproductionSetup::critical(&k);
        assert!(reproduce_exponential(&k, 0, 0, 2, 0, &s).is_err());
        assert!(reproduce_exponential(&k, 3, 0, 0, 0, &s).is_err());
        s.points_per_axis = 3;
        assert!(reproduce_exponential(&k, 0, 0, 0, 0, &s).is_err());
        let mut s = ReproductionSetup::critical(&k);
        s.shifts_x = IndexRange::new(s.shifts_x.min() + 2, s.shifts_x.max()).unwrap();
        assert!(reproduce_exponential(&k, 0, 0, 0, 0, &s).is_err());
    }
}
