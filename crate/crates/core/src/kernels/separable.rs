use alloc::vec::Vec;

use num_complex::Complex64;

use super::{bspline, modulation_sum, sinc};
use crate::quadrature::PanelFrame;
use crate::{Error, Result, SpectralGrid};

/// Separable sum-of-modulated-splines kernel of orders `(r1, r2)`.
///
/// Frequency response `Σ_{k1,k2} sinc^{r1}(Ωx/Ω0x − k1)·sinc^{r2}(Ωy/Ω0y − k2)`,
/// impulse response `β^{r1−1}(x/T0x)·β^{r2−1}(y/T0y)·Σ e^{j(k1Ω0x x + k2Ω0y y)}`,
/// supported on `[−r1·T0x/2, r1·T0x/2] × [−r2·T0y/2, r2·T0y/2]` whatever `|K1|, |K2|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableSmsKernel {
    grid: SpectralGrid,
    r1: u32,
    r2: u32,
}

impl SeparableSmsKernel {
    /// Kernel on `grid` with spline orders `r1, r2 ≥ 1`.
    pub fn new(grid: SpectralGrid, r1: u32, r2: u32) -> Result<Self> {
        if r1 == 0 || r2 == 0 {
            return Err(Error::invalid(alloc::format!("SMS orders must be ≥ 1, got r1 = {r1}, r2 = {r2}")));
        }
        if r1 > 32 || r2 > 32 {
            return Err(Error::invalid("SMS orders above 32 are not supported"));
        }
        Ok(Self { grid, r1, r2 })
    }

    /// Spectral grid the kernel is built on.
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// Spline order along `x`.
    pub fn r1(&self) -> u32 {
        self.r1
    }

    /// Spline order along `y`.
    pub fn r2(&self) -> u32 {
        self.r2
    }

    /// Frequency response `G_S(jΩx, jΩy)`; real-valued.
    pub fn freq(&self, omega_x: f64, omega_y: f64) -> f64 {
        // the double sum of products factors into a product of sums
        let g = &self.grid;
        let ux = omega_x / g.omega0x();
        let uy = omega_y / g.omega0y();
        let sx: f64 = g.k1().iter().map(|k| sinc(ux - k as f64).powi(self.r1 as i32)).sum();
        let sy: f64 = g.k2().iter().map(|k| sinc(uy - k as f64).powi(self.r2 as i32)).sum();
        sx * sy
    }

    /// Impulse response `g_S(x, y)`; exactly zero outside the support box.
    pub fn spatial(&self, x: f64, y: f64) -> Complex64 {
        let fx = self.axis_x(x);
        if fx == Complex64::new(0.0, 0.0) {
            return fx;
        }
        fx * self.axis_y(y)
    }

    /// `x` factor of the impulse response, `β^{r1−1}(x/T0x)·Σ_{k1} e^{jk1Ω0x x}`.
    pub fn axis_x(&self, x: f64) -> Complex64 {
        let b = bspline(self.r1 - 1, x / self.grid.t0x());
        if b == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        modulation_sum(self.grid.k1(), self.grid.omega0x() * x) * b
    }

    /// `y` factor of the impulse response.
    pub fn axis_y(&self, y: f64) -> Complex64 {
        let b = bspline(self.r2 - 1, y / self.grid.t0y());
        if b == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        modulation_sum(self.grid.k2(), self.grid.omega0y() * y) * b
    }

    /// Half-widths `(r1·T0x/2, r2·T0y/2)` of the support box.
    pub fn support_half_widths(&self) -> (f64, f64) {
        (0.5 * self.r1 as f64 * self.grid.t0x(), 0.5 * self.r2 as f64 * self.grid.t0y())
    }

    /// Identity frame with breakpoints on the spline knots (multiples of `T0/2`).
    pub fn panel_frame(&self) -> PanelFrame {
        let knots = |r: u32, t0: f64| -> Vec<f64> {
            (0..=r).map(|i| (i as f64 - 0.5 * r as f64) * t0).collect()
        };
        PanelFrame {
            to_xy: [[1.0, 0.0], [0.0, 1.0]],
            a_breaks: knots(self.r1, self.grid.t0x()),
            b_breaks: knots(self.r2, self.grid.t0y()),
        }
    }
}
