use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::kernels::KernelSpec;
use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

const NODES_PER_PANEL: usize = 8;

/// Convolution of a truncated Gaussian pulse with a sampling kernel,
/// `(h ∗ g)(x, y) = ∬ g(z)·h((x, y) − z) dz`.
///
/// The kernel is tabulated once on a composite Gauss–Legendre grid in its panel
/// frame, so kernel discontinuities fall on panel edges. Panels are no wider than
/// `σ` (measured along each frame axis) nor half a modulation period. Each
/// evaluation sums the nodes that fall inside the pulse's truncation box around
/// `(x, y)`; when the frame axes are orthogonal the Gaussian weight factors into
/// two 1-D tables.
#[derive(Debug, Clone)]
pub struct GaussianBlur {
    sigma: f64,
    halfwidth: f64,
    to_xy: [[f64; 2]; 2],
    from_xy: [[f64; 2]; 2],
    a: Vec<f64>,
    b: Vec<f64>,
    // row-major |a| × |b| table of weight·jacobian·g
    table: Vec<Complex64>,
    ca: f64,
    cb: f64,
    cab: f64,
}

impl GaussianBlur {
    /// Tabulates `kernel` for a Gaussian of standard deviation `sigma` truncated to
    /// `|x|, |y| ≤ halfwidth`.
    pub fn new(kernel: &KernelSpec, sigma: f64, halfwidth: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && halfwidth > 0.0 && halfwidth.is_finite()) {
            return Err(Error::invalid("Gaussian σ and truncation half-width must be positive"));
        }
        let frame = kernel.panel_frame();
        let m = frame.to_xy;
        let ca = m[0][0] * m[0][0] + m[1][0] * m[1][0];
        let cb = m[0][1] * m[0][1] + m[1][1] * m[1][1];
        let mut cab = m[0][0] * m[0][1] + m[1][0] * m[1][1];
        if cab.abs() <= 1e-14 * (ca * cb).sqrt() {
            cab = 0.0;
        }
        let (bw_a, bw_b) = kernel.frame_bandwidth();
        let width = |c: f64, bw: f64| {
            let w = sigma / c.sqrt();
            if bw > 0.0 {
                w.min(PI / bw)
            } else {
                w
            }
        };
        let gl = GaussLegendre::new(NODES_PER_PANEL);
        let (a, wa) = gl.composite(&frame.a_breaks, width(ca, bw_a));
        let (b, wb) = gl.composite(&frame.b_breaks, width(cb, bw_b));
        let vals = kernel.frame_values(&a, &b);
        let jac = frame.jacobian();
        let mut table = Vec::with_capacity(a.len() * b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                table.push(vals[(i, j)] * (wa[i] * wb[j] * jac));
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let from_xy = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        Ok(Self { sigma, halfwidth, to_xy: m, from_xy, a, b, table, ca, cb, cab })
    }

    /// Pulse standard deviation.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Half-width of the square truncation box.
    pub fn truncation_halfwidth(&self) -> f64 {
        self.halfwidth
    }

    /// Number of quadrature nodes in the kernel table.
    pub fn node_count(&self) -> usize {
        self.table.len()
    }

    /// `(h ∗ g)(x, y)` for a unit pulse at the origin.
    pub fn response(&self, x: f64, y: f64) -> Complex64 {
        let fi = &self.from_xy;
        let m = &self.to_xy;
        let hw = self.halfwidth;
        let pa = fi[0][0] * x + fi[0][1] * y;
        let pb = fi[1][0] * x + fi[1][1] * y;
        let reach_a = hw * (fi[0][0].abs() + fi[0][1].abs());
        let reach_b = hw * (fi[1][0].abs() + fi[1][1].abs());
        let (i0, i1) = index_range(&self.a, pa - reach_a, pa + reach_a);
        if i0 >= i1 {
            return Complex64::new(0.0, 0.0);
        }
        let (j0, j1) = index_range(&self.b, pb - reach_b, pb + reach_b);
        if j0 >= j1 {
            return Complex64::new(0.0, 0.0);
        }
        let inv2s2 = 0.5 / (self.sigma * self.sigma);
        let separable = self.cab == 0.0;
        let eb: Vec<f64> = if separable {
            self.b[j0..j1].iter().map(|&bj| (-(self.cb * (pb - bj) * (pb - bj)) * inv2s2).exp()).collect()
        } else {
            Vec::new()
        };
        let nb = self.b.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in i0..i1 {
            let da = pa - self.a[i];
            // b-interval where both |Δx| ≤ hw and |Δy| ≤ hw
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for row in m {
                let (ma, mb) = (row[0], row[1]);
                if mb == 0.0 {
                    if (ma * da).abs() > hw {
                        lo = f64::INFINITY;
                    }
                    continue;
                }
                // |ma·Δa + mb·Δb| ≤ hw with Δb = pb − b
                let d1 = (-hw - ma * da) / mb;
                let d2 = (hw - ma * da) / mb;
                let (dlo, dhi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
                lo = lo.max(pb - dhi);
                hi = hi.min(pb - dlo);
            }
            if !(lo <= hi) {
                continue;
            }
            let (k0, k1) = index_range(&self.b[j0..j1], lo, hi);
            if k0 >= k1 {
                continue;
            }
            let row = &self.table[i * nb + j0..i * nb + j1];
            let (row, nodes) = (&row[k0..k1], &self.b[j0 + k0..j0 + k1]);
            if separable {
                let inner: Complex64 = row.iter().zip(&eb[k0..k1]).map(|(r, e)| r * e).sum();
                acc += inner * (-(self.ca * da * da) * inv2s2).exp();
            } else {
                acc += row
                    .iter()
                    .zip(nodes)
                    .map(|(r, &b)| {
                        let db = pb - b;
                        r * (-(self.ca * da * da + 2.0 * self.cab * da * db + self.cb * db * db) * inv2s2).exp()
                    })
                    .sum::<Complex64>();
            }
        }
        acc
    }
}

// Indices [i0, i1) of the sorted `nodes` lying in [lo, hi].
fn index_range(nodes: &[f64], lo: f64, hi: f64) -> (usize, usize) {
    let i0 = nodes.partition_point(|&v| v < lo);
    let i1 = nodes.partition_point(|&v| v <= hi);
    (i0, i1.max(i0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{NonseparableKernel, SeparableSmsKernel};
    use crate::{IndexRange, SpectralGrid};
    use approx::assert_relative_eq;

    // Far inside a constant region of a box kernel the response is the pulse mass.
    #[test]
    fn flat_kernel_region_gives_pulse_mass() {
        let g = SpectralGrid::symmetric(0, 0, 1.0, 1.0).unwrap();
        let k: KernelSpec = SeparableSmsKernel::new(g, 1, 1).unwrap().into();
        let sigma = 0.05;
        let blur = GaussianBlur::new(&k, sigma, 6.0 * sigma).unwrap();
        let mass = 2.0 * PI * sigma * sigma;
        let v = blur.response(0.3, -0.2);
        assert_relative_eq!(v.re, mass, max_relative = 1e-7);
        assert_eq!(blur.response(10.0, 0.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn oblique_frame_matches_orthogonal_formula() {
        // unequal base frequencies make the nonseparable frame oblique
        let g = SpectralGrid::new(IndexRange::new(-1, 1).unwrap(), IndexRange::new(-1, 1).unwrap(), 2.0, 3.0).unwrap();
        let k: KernelSpec = NonseparableKernel::with_unit_weights(g).into();
        let blur = GaussianBlur::new(&k, 0.05, 0.3).unwrap();
        assert!(blur.cab != 0.0);
        // compare with the same integral evaluated in the orthogonal (x, y) frame over the pulse box
        let (x, y) = (0.2, -0.1);
        let gl = GaussLegendre::new(16);
        let (u, wu) = gl.composite(&[-0.3, 0.3], 0.02);
        let mut oracle = Complex64::new(0.0, 0.0);
        for (ui, wi) in u.iter().zip(&wu) {
            for (vj, wj) in u.iter().zip(&wu) {
                let h = (-(ui * ui + vj * vj) / (2.0 * 0.05 * 0.05)).exp();
                oracle += k.spatial(x - ui, y - vj) * (h * wi * wj);
            }
        }
        let got = blur.response(x, y);
        assert!((got - oracle).norm() < 1e-8 * oracle.norm(), "{got} vs {oracle}");
    }
}
