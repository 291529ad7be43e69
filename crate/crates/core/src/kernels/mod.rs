//! Sampling kernels: the separable sum-of-modulated-splines (SMS) family and the
//! rotated nonseparable kernel, evaluated in closed form in both domains, plus
//! numerical checks of their admissibility (alias cancellation, transform pairs,
//! reproduction of modulated polynomials).
//!
//! Conventions: `sinc(u) = sin(πu)/(πu)`, `G(Ωx, Ωy) = ∬ g(x, y)·e^{−j(Ωx x + Ωy y)} dx dy`.

mod alias;
mod bspline;
mod nonseparable;
mod reproduce;
mod separable;
mod transform;

use core::f64::consts::PI;

use num_complex::Complex64;

pub use alias::{alias_check, AliasPoint, AliasReport, AliasTolerances};
pub use bspline::bspline;
pub use nonseparable::NonseparableKernel;
pub use reproduce::{reproduce_exponential, ReproductionFit, ReproductionSetup};
pub use separable::SeparableSmsKernel;
pub use transform::{fourier_consistency, min_consistency_grid, sinc_product_energy};

use crate::quadrature::PanelFrame;
use crate::{CMatrix, IndexRange, Result, SpectralGrid};

/// Normalized sinc, `sin(πu)/(πu)` with `sinc(0) = 1`. Exactly zero at nonzero
/// integers.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        return 1.0;
    }
    let n = u.round();
    let frac = u - n;
    if frac == 0.0 {
        return 0.0;
    }
    // sin(πu) = (−1)^n·sin(π(u − n)) keeps the argument small
    let s = (PI * frac).sin();
    let s = if (n as i64) % 2 == 0 { s } else { -s };
    s / (PI * u)
}

/// `Σ_{k ∈ range} e^{jkθ}`.
pub(crate) fn modulation_sum(range: IndexRange, theta: f64) -> Complex64 {
    range.iter().map(|k| Complex64::from_polar(1.0, k as f64 * theta)).sum()
}

/// Either kernel family, with a common evaluation interface.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Separable SMS kernel.
    Separable(SeparableSmsKernel),
    /// Rotated nonseparable kernel.
    Nonseparable(NonseparableKernel),
}

impl From<SeparableSmsKernel> for KernelSpec {
    fn from(k: SeparableSmsKernel) -> Self {
        KernelSpec::Separable(k)
    }
}

impl From<NonseparableKernel> for KernelSpec {
    fn from(k: NonseparableKernel) -> Self {
        KernelSpec::Nonseparable(k)
    }
}

impl KernelSpec {
    /// Spectral grid the kernel is built on.
    pub fn grid(&self) -> &SpectralGrid {
        match self {
            KernelSpec::Separable(k) => k.grid(),
            KernelSpec::Nonseparable(k) => k.grid(),
        }
    }

    /// Closed-form frequency response `G(jΩx, jΩy)`.
    pub fn freq(&self, omega_x: f64, omega_y: f64) -> Complex64 {
        match self {
            KernelSpec::Separable(k) => Complex64::new(k.freq(omega_x, omega_y), 0.0),
            KernelSpec::Nonseparable(k) => k.freq(omega_x, omega_y),
        }
    }

    /// Closed-form impulse response `g(x, y)`.
    pub fn spatial(&self, x: f64, y: f64) -> Complex64 {
        match self {
            KernelSpec::Separable(k) => k.spatial(x, y),
            KernelSpec::Nonseparable(k) => k.spatial(x, y),
        }
    }

    /// Ratio between the Fourier transform of [`spatial`](Self::spatial) and
    /// [`freq`](Self::freq).
    ///
    /// The SMS impulse response carries no `1/(T0x·T0y)` normalization, so its
    /// transform is `T0x·T0y·G_S`; the nonseparable pair is normalized.
    pub fn spatial_gain(&self) -> f64 {
        match self {
            KernelSpec::Separable(k) => k.grid().t0x() * k.grid().t0y(),
            KernelSpec::Nonseparable(_) => 1.0,
        }
    }

    /// Fourier transform of the impulse response, `spatial_gain()·G`. This is the
    /// response seen by acquisition and divided out during demodulation.
    pub fn transfer(&self, omega_x: f64, omega_y: f64) -> Complex64 {
        self.freq(omega_x, omega_y) * self.spatial_gain()
    }

    /// Half-widths of the axis-aligned box containing the support.
    pub fn support_half_widths(&self) -> (f64, f64) {
        match self {
            KernelSpec::Separable(k) => k.support_half_widths(),
            KernelSpec::Nonseparable(k) => k.support_half_widths(),
        }
    }

    /// Coordinates in which the support is a rectangle and the impulse response is
    /// smooth between breakpoints.
    pub fn panel_frame(&self) -> PanelFrame {
        match self {
            KernelSpec::Separable(k) => k.panel_frame(),
            KernelSpec::Nonseparable(k) => k.panel_frame(),
        }
    }

    /// Impulse response on the tensor grid `a × b` of frame coordinates. Points
    /// must avoid the frame breakpoints (Gauss nodes always do).
    pub fn frame_values(&self, a: &[f64], b: &[f64]) -> CMatrix {
        match self {
            KernelSpec::Separable(k) => {
                let fx: alloc::vec::Vec<Complex64> = a.iter().map(|&x| k.axis_x(x)).collect();
                let fy: alloc::vec::Vec<Complex64> = b.iter().map(|&y| k.axis_y(y)).collect();
                CMatrix::from_fn(a.len(), b.len(), |i, j| fx[i] * fy[j])
            }
            KernelSpec::Nonseparable(k) => k.rotated_values(a, b),
        }
    }

    /// Largest angular frequency of the modulation along the two frame axes, in
    /// radians per unit of frame coordinate.
    pub fn frame_bandwidth(&self) -> (f64, f64) {
        let g = self.grid();
        match self {
            KernelSpec::Separable(_) => (g.k1().max_abs() as f64 * g.omega0x(), g.k2().max_abs() as f64 * g.omega0y()),
            KernelSpec::Nonseparable(_) => {
                let (k1, k2) = (g.k1(), g.k2());
                let sum = (k1.min() + k2.min()).abs().max((k1.max() + k2.max()).abs());
                let diff = (k2.min() - k1.max()).abs().max((k2.max() - k1.min()).abs());
                (0.5 * sum as f64, 0.5 * diff as f64)
            }
        }
    }

    /// Whether the impulse response is real: symmetric index ranges, and for the
    /// nonseparable kernel Hermitian weights.
    pub fn is_real_valued(&self) -> bool {
        match self {
            KernelSpec::Separable(k) => k.grid().is_symmetric(),
            KernelSpec::Nonseparable(k) => k.is_hermitian(),
        }
    }

    /// [`alias_check`] of this kernel's frequency response with default tolerances.
    pub fn alias_check(&self, omega_sx: f64, omega_sy: f64, m_max: u32) -> Result<AliasReport> {
        alias_check(|wx, wy| self.freq(wx, wy), self.grid(), omega_sx, omega_sy, m_max, AliasTolerances::default())
    }

    /// Short family name, `"separable"` or `"nonseparable"`.
    pub fn family(&self) -> &'static str {
        match self {
            KernelSpec::Separable(_) => "separable",
            KernelSpec::Nonseparable(_) => "nonseparable",
        }
    }
}
