use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::KernelSpec;
use crate::quadrature::GaussLegendre;
use crate::{CMatrix, Error, Result};

const NODES_PER_PANEL: usize = 16;

/// Smallest `n_grid` accepted by [`fourier_consistency`] for this kernel: the
/// spatial step `extent/n_grid` must not exceed `min(T0x, T0y)/(8·max(|K1|, |K2|))`.
pub fn min_consistency_grid(kernel: &KernelSpec) -> usize {
    let (hx, hy) = kernel.support_half_widths();
    let step = max_step(kernel);
    ((2.0 * hx.max(hy) / step) * (1.0 - 1e-12)).ceil() as usize
}

fn max_step(kernel: &KernelSpec) -> f64 {
    let g = kernel.grid();
    let kmax = g.k1().len().max(g.k2().len()) as f64;
    g.t0x().min(g.t0y()) / (8.0 * kmax)
}

/// Numerical check of the closed-form transform pair of `kernel`.
///
/// The impulse response is integrated against `e^{−j(Ωx x + Ωy y)}` with a
/// composite 16-point Gauss–Legendre rule whose panels follow the kernel's
/// breakpoints; `n_grid` nodes per axis span the support, so the spatial step is
/// `extent/n_grid`. Frequencies are taken on a zero-padded lattice of spacing
/// `2π/(pad_factor·extent)` covering `(max|k| + 2)·Ω0` on each axis.
///
/// Returns `max |Ĝ − G̃| / |G̃|` over the frequencies where
/// `|G̃| > 10⁻³·max |G̃|`, with `G̃` the kernel's [`transfer`](KernelSpec::transfer).
///
/// # Errors
///
/// [`Error::InvalidParameter`] when the step exceeds
/// `min(T0x, T0y)/(8·max(|K1|, |K2|))` or `pad_factor < 4`.
pub fn fourier_consistency(kernel: &KernelSpec, n_grid: usize, pad_factor: usize) -> Result<f64> {
    let need = min_consistency_grid(kernel);
    if n_grid < need {
        return Err(Error::invalid(alloc::format!(
            "n_grid = {n_grid} is too coarse for this kernel; at least {need} points per axis are needed"
        )));
    }
    if pad_factor < 4 {
        return Err(Error::invalid(alloc::format!("pad_factor must be ≥ 4, got {pad_factor}")));
    }

    let frame = kernel.panel_frame();
    let (ext_a, ext_b) = frame.extents();
    let panels = (n_grid / NODES_PER_PANEL).max(1);
    let gl = GaussLegendre::new(NODES_PER_PANEL);
    let (a, wa) = gl.composite(&frame.a_breaks, ext_a / panels as f64);
    let (b, wb) = gl.composite(&frame.b_breaks, ext_b / panels as f64);
    let mut vals = kernel.frame_values(&a, &b);
    let jac = frame.jacobian();
    for i in 0..a.len() {
        for j in 0..b.len() {
            vals[(i, j)] *= wa[i] * wb[j] * jac;
        }
    }

    let g = kernel.grid();
    let (hx, hy) = kernel.support_half_widths();
    let axis = |half: f64, k: crate::IndexRange, w0: f64| -> Vec<f64> {
        let d = 2.0 * PI / (pad_factor as f64 * 2.0 * half);
        let band = (k.max_abs() as f64 + 2.0) * w0;
        let n = (band / d).floor() as i64;
        (-n..=n).map(|i| i as f64 * d).collect()
    };
    let wxs = axis(hx, g.k1(), g.omega0x());
    let wys = axis(hy, g.k2(), g.omega0y());

    let m = &frame.to_xy;
    let mut numeric = CMatrix::zeros(wxs.len(), wys.len());
    let mut inner = alloc::vec![Complex64::new(0.0, 0.0); a.len()];
    let mut eb = alloc::vec![Complex64::new(0.0, 0.0); b.len()];
    for (p, &wx) in wxs.iter().enumerate() {
        for (r, &wy) in wys.iter().enumerate() {
            // Ωx·x + Ωy·y = α·a + β·b
            let alpha = wx * m[0][0] + wy * m[1][0];
            let beta = wx * m[0][1] + wy * m[1][1];
            for (e, &bj) in eb.iter_mut().zip(&b) {
                *e = Complex64::from_polar(1.0, -beta * bj);
            }
            for (i, acc) in inner.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..b.len() {
                    s += vals[(i, j)] * eb[j];
                }
                *acc = s;
            }
            numeric[(p, r)] = inner.iter().zip(&a).map(|(s, &ai)| s * Complex64::from_polar(1.0, -alpha * ai)).sum();
        }
    }

    let analytic = CMatrix::from_fn(wxs.len(), wys.len(), |p, r| kernel.transfer(wxs[p], wys[r]));
    let peak = analytic.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (num, ana) in numeric.iter().zip(analytic.iter()) {
        if ana.norm() > 1e-3 * peak {
            worst = worst.max((num - ana).norm() / ana.norm());
        }
    }
    Ok(worst)
}

/// `∬_{[−h, h]²} |sinc(u + v)·sinc(v − u)|² du dv` by composite 8-point
/// Gauss–Legendre quadrature on panels of width 1/4. The integral over the plane
/// is 1/2; the square misses a tail of order `1/(2π²h)`.
pub fn sinc_product_energy(half_width: f64) -> f64 {
    let gl = GaussLegendre::new(8);
    let breaks = [-half_width, half_width];
    let (u, w) = gl.composite(&breaks, 0.25);
    // sin(π(u ± v)) from per-node sines and cosines
    let sc: Vec<(f64, f64)> = u.iter().map(|&x| ((PI * x).sin(), (PI * x).cos())).collect();
    let mut total = 0.0;
    for i in 0..u.len() {
        let (si, ci) = sc[i];
        let mut row = 0.0;
        for j in 0..u.len() {
            let (sj, cj) = sc[j];
            let sum = u[i] + u[j];
            let diff = u[j] - u[i];
            let a = if sum.abs() < 1e-9 { 1.0 } else { (si * cj + ci * sj) / (PI * sum) };
            let b = if diff.abs() < 1e-9 { 1.0 } else { (sj * ci - cj * si) / (PI * diff) };
            let v = a * b;
            row += w[j] * v * v;
        }
        total += w[i] * row;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{NonseparableKernel, SeparableSmsKernel};
    use crate::SpectralGrid;

    #[test]
    fn coarse_grid_and_small_padding_rejected() {
        let g = SpectralGrid::symmetric(2, 2, 2.0 * PI, 2.0 * PI).unwrap();
        let k: KernelSpec = SeparableSmsKernel::new(g, 1, 1).unwrap().into();
        let need = min_consistency_grid(&k);
        assert_eq!(need, 40);
        assert!(fourier_consistency(&k, need - 1, 4).is_err());
        assert!(fourier_consistency(&k, need, 3).is_err());
    }

    #[test]
    fn small_kernels_consistent() {
        let g = SpectralGrid::symmetric(1, 1, 2.0, 3.0).unwrap();
        for k in [KernelSpec::from(SeparableSmsKernel::new(g, 2, 1).unwrap()), NonseparableKernel::with_unit_weights(g).into()] {
            let n = min_consistency_grid(&k);
            let e = fourier_consistency(&k, n, 4).unwrap();
            assert!(e < 1e-8, "{} {e}", k.family());
        }
    }
}
