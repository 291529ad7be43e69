use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::bspline::rect;
use super::sinc;
use crate::quadrature::PanelFrame;
use crate::{CMatrix, Error, Result, SpectralGrid};

/// Nonseparable kernel built from a rotated pair of rect windows.
///
/// Writing `s = Ω0x·x + Ω0y·y` and `t = Ω0y·y − Ω0x·x`, the impulse response is
/// `(Ω0x·Ω0y/8)·rect(s/4π)·rect(t/4π)·Σ q[k1,k2]·e^{j(k1Ω0x x + k2Ω0y y)}`, a
/// diamond of half-diagonals `T0x`, `T0y`. Its transform is
/// `π²·Σ q[k1,k2]·sinc(u − k1 + v − k2)·sinc(v − k2 − u + k1)` with `u = Ωx/Ω0x`,
/// `v = Ωy/Ω0y`, so on the spectral grid it equals `π²·q`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonseparableKernel {
    grid: SpectralGrid,
    q: CMatrix,
}

impl NonseparableKernel {
    /// Kernel with weights `q` (shape `|K1| × |K2|`, rows indexed by `k1`).
    /// Every weight must be finite and nonzero.
    pub fn new(grid: SpectralGrid, q: CMatrix) -> Result<Self> {
        let (n1, n2) = (grid.k1().len(), grid.k2().len());
        if q.nrows() != n1 || q.ncols() != n2 {
            return Err(Error::invalid(alloc::format!(
                "weight matrix is {}×{}, spectral grid needs {n1}×{n2}",
                q.nrows(),
                q.ncols()
            )));
        }
        if q.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::invalid("kernel weights must be finite"));
        }
        if q.iter().any(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(Error::invalid("kernel weights must be nonzero on the whole spectral grid"));
        }
        Ok(Self { grid, q })
    }

    /// Kernel with all weights equal to one.
    pub fn with_unit_weights(grid: SpectralGrid) -> Self {
        let q = CMatrix::from_element(grid.k1().len(), grid.k2().len(), Complex64::new(1.0, 0.0));
        Self { grid, q }
    }

    /// Spectral grid the kernel is built on.
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// Weight matrix, rows indexed by `k1 − min K1`.
    pub fn weights(&self) -> &CMatrix {
        &self.q
    }

    /// Weight `q[k1, k2]`.
    pub fn weight(&self, k1: i32, k2: i32) -> Complex64 {
        self.q[(self.grid.k1().offset(k1), self.grid.k2().offset(k2))]
    }

    /// Whether `q[−k1, −k2] = conj(q[k1, k2])` on a symmetric grid, which makes
    /// the impulse response real.
    pub fn is_hermitian(&self) -> bool {
        let g = &self.grid;
        if !g.is_symmetric() {
            return false;
        }
        g.points().all(|(k1, k2, _, _)| {
            let d = self.weight(-k1, -k2) - self.weight(k1, k2).conj();
            d.norm() <= 1e-14 * self.weight(k1, k2).norm()
        })
    }

    /// Frequency response `G_NS(jΩx, jΩy)`.
    pub fn freq(&self, omega_x: f64, omega_y: f64) -> Complex64 {
        let g = &self.grid;
        let u = omega_x / g.omega0x();
        let v = omega_y / g.omega0y();
        let (a, b) = (u + v, v - u);
        let (k1, k2) = (g.k1(), g.k2());
        let m_min = k1.min() + k2.min();
        let n_min = k2.min() - k1.max();
        let sa: Vec<f64> = (m_min..=k1.max() + k2.max()).map(|m| sinc(a - m as f64)).collect();
        let sb: Vec<f64> = (n_min..=k2.max() - k1.min()).map(|n| sinc(b - n as f64)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, p) in k1.iter().enumerate() {
            for (j, r) in k2.iter().enumerate() {
                let w = sa[(p + r - m_min) as usize] * sb[(r - p - n_min) as usize];
                if w != 0.0 {
                    acc += self.q[(i, j)] * w;
                }
            }
        }
        acc * (PI * PI)
    }

    /// Impulse response `g_NS(x, y)`; exactly zero outside the diamond.
    pub fn spatial(&self, x: f64, y: f64) -> Complex64 {
        let g = &self.grid;
        let s = g.omega0x() * x + g.omega0y() * y;
        let t = g.omega0y() * y - g.omega0x() * x;
        let window = rect(s / (4.0 * PI)) * rect(t / (4.0 * PI));
        if window == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, k1) in g.k1().iter().enumerate() {
            for (j, k2) in g.k2().iter().enumerate() {
                let phase = k1 as f64 * g.omega0x() * x + k2 as f64 * g.omega0y() * y;
                acc += self.q[(i, j)] * Complex64::from_polar(1.0, phase);
            }
        }
        acc * (window * self.amplitude())
    }

    /// Half-widths `(T0x, T0y)` of the bounding box of the diamond.
    pub fn support_half_widths(&self) -> (f64, f64) {
        (self.grid.t0x(), self.grid.t0y())
    }

    /// Frame in the rotated coordinates `(s, t)`, both spanning `[−2π, 2π]`.
    pub fn panel_frame(&self) -> PanelFrame {
        let (wx, wy) = (self.grid.omega0x(), self.grid.omega0y());
        PanelFrame {
            to_xy: [[0.5 / wx, -0.5 / wx], [0.5 / wy, 0.5 / wy]],
            a_breaks: alloc::vec![-2.0 * PI, 2.0 * PI],
            b_breaks: alloc::vec![-2.0 * PI, 2.0 * PI],
        }
    }

    /// Impulse response at the interior points `(s_i, t_j)` of the rotated frame,
    /// evaluated as the bilinear form `E_s·Q̃·E_tᵀ` where `Q̃` regroups the weights
    /// by `k1 + k2` and `k2 − k1`. The window is taken to be one.
    pub fn rotated_values(&self, s: &[f64], t: &[f64]) -> CMatrix {
        let g = &self.grid;
        let (k1, k2) = (g.k1(), g.k2());
        let m_min = k1.min() + k2.min();
        let n_min = k2.min() - k1.max();
        let nm = (k1.max() + k2.max() - m_min) as usize + 1;
        let nn = (k2.max() - k1.min() - n_min) as usize + 1;
        let mut qt = CMatrix::zeros(nm, nn);
        for (i, p) in k1.iter().enumerate() {
            for (j, r) in k2.iter().enumerate() {
                qt[((p + r - m_min) as usize, (r - p - n_min) as usize)] += self.q[(i, j)];
            }
        }
        let es = CMatrix::from_fn(s.len(), nm, |i, m| Complex64::from_polar(1.0, 0.5 * s[i] * (m as i32 + m_min) as f64));
        let et = CMatrix::from_fn(nn, t.len(), |n, j| Complex64::from_polar(1.0, 0.5 * t[j] * (n as i32 + n_min) as f64));
        (es * qt * et) * Complex64::new(self.amplitude(), 0.0)
    }

    fn amplitude(&self) -> f64 {
        self.grid.omega0x() * self.grid.omega0y() / 8.0
    }
}
