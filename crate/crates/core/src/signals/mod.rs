//! Pulse streams `f(x, y) = Σ γℓ·h(x − xℓ, y − yℓ)`, their acquisition through a
//! sampling kernel on a rectangular lattice, and additive white Gaussian noise.

mod blur;
mod noise;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

pub use blur::GaussianBlur;
pub use noise::add_awgn;

use crate::kernels::KernelSpec;
use crate::{Axis, CMatrix, Error, IndexRange, Result};

/// Default Gaussian truncation half-width in units of `σ`.
pub const DEFAULT_TRUNCATION_SIGMAS: f64 = 6.0;

/// Smallest accepted Gaussian truncation half-width in units of `σ`.
pub const MIN_TRUNCATION_SIGMAS: f64 = 4.0;

/// One weighted, shifted pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    /// Amplitude `γ`.
    pub gamma: Complex64,
    /// Location along `x`.
    pub x: f64,
    /// Location along `y`.
    pub y: f64,
}

impl Pulse {
    /// Pulse with real amplitude.
    pub fn new(gamma: f64, x: f64, y: f64) -> Self {
        Self { gamma: Complex64::new(gamma, 0.0), x, y }
    }
}

/// Pulse profile `h` with a closed-form transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    /// Dirac impulse, `H = 1`.
    Dirac,
    /// `exp(−(x² + y²)/(2σ²))` restricted to `|x|, |y| ≤ truncation_halfwidth`.
    Gaussian {
        /// Standard deviation.
        sigma: f64,
        /// Half-width of the square truncation box.
        truncation_halfwidth: f64,
    },
}

impl PulseShape {
    /// Gaussian with the default truncation of `6σ`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::truncated_gaussian(sigma, DEFAULT_TRUNCATION_SIGMAS * sigma)
    }

    /// Gaussian truncated at `halfwidth ≥ 4σ`.
    pub fn truncated_gaussian(sigma: f64, halfwidth: f64) -> Result<Self> {
        let s = PulseShape::Gaussian { sigma, truncation_halfwidth: halfwidth };
        s.validate()?;
        Ok(s)
    }

    /// Checks `σ > 0` and `truncation_halfwidth ≥ 4σ`.
    pub fn validate(&self) -> Result<()> {
        if let PulseShape::Gaussian { sigma, truncation_halfwidth } = *self {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::invalid(alloc::format!("Gaussian σ must be positive, got {sigma}")));
            }
            if !(truncation_halfwidth >= MIN_TRUNCATION_SIGMAS * sigma * (1.0 - 1e-12)) || !truncation_halfwidth.is_finite() {
                return Err(Error::invalid(alloc::format!(
                    "truncation half-width {truncation_halfwidth} is below 4σ = {}",
                    4.0 * sigma
                )));
            }
        }
        Ok(())
    }

    /// Transform `H(jΩx, jΩy)`: 1 for a Dirac, `2πσ²·exp(−σ²(Ωx² + Ωy²)/2)` for a
    /// Gaussian (the untruncated closed form).
    pub fn ctft(&self, omega_x: f64, omega_y: f64) -> f64 {
        match *self {
            PulseShape::Dirac => 1.0,
            PulseShape::Gaussian { sigma, .. } => {
                let s2 = sigma * sigma;
                2.0 * PI * s2 * (-0.5 * s2 * (omega_x * omega_x + omega_y * omega_y)).exp()
            }
        }
    }

    /// Half-width of the pulse support (0 for a Dirac).
    pub fn halfwidth(&self) -> f64 {
        match *self {
            PulseShape::Dirac => 0.0,
            PulseShape::Gaussian { truncation_halfwidth, .. } => truncation_halfwidth,
        }
    }
}

/// Field of view `[x0, x1] × [y0, y1]` containing the pulse locations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fov {
    /// `[x0, x1]`.
    pub x: [f64; 2],
    /// `[y0, y1]`.
    pub y: [f64; 2],
}

impl Fov {
    /// Unit square `[0, 1]²`.
    pub const UNIT: Fov = Fov { x: [0.0, 1.0], y: [0.0, 1.0] };

    /// Whether `(x, y)` lies in the field of view.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x[0] && x <= self.x[1] && y >= self.y[0] && y <= self.y[1]
    }
}

/// A finite stream of pulses of a common shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FriSignal {
    pulses: Vec<Pulse>,
    shape: PulseShape,
}

impl FriSignal {
    /// Signal with at least one pulse, finite parameters and distinct locations.
    pub fn new(pulses: Vec<Pulse>, shape: PulseShape) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::invalid("a signal needs at least one pulse"));
        }
        shape.validate()?;
        for p in &pulses {
            if !(p.x.is_finite() && p.y.is_finite() && p.gamma.re.is_finite() && p.gamma.im.is_finite()) {
                return Err(Error::invalid("pulse parameters must be finite"));
            }
        }
        for (i, p) in pulses.iter().enumerate() {
            if pulses[..i].iter().any(|q| q.x == p.x && q.y == p.y) {
                return Err(Error::invalid(alloc::format!("two pulses share the location ({}, {})", p.x, p.y)));
            }
        }
        Ok(Self { pulses, shape })
    }

    /// The pulses.
    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    /// Common pulse shape.
    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    /// Number of pulses `L`.
    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    /// Always false; signals hold at least one pulse.
    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// `F(jΩx, jΩy) = H·Σ γℓ·e^{−j(Ωx xℓ + Ωy yℓ)}`.
    pub fn spectrum(&self, omega_x: f64, omega_y: f64) -> Complex64 {
        let s: Complex64 =
            self.pulses.iter().map(|p| p.gamma * Complex64::from_polar(1.0, -(omega_x * p.x + omega_y * p.y))).sum();
        s * self.shape.ctft(omega_x, omega_y)
    }

    /// Whether every amplitude is real.
    pub fn has_real_amplitudes(&self) -> bool {
        self.pulses.iter().all(|p| p.gamma.im == 0.0)
    }

    /// Smallest box `[x0, x1] × [y0, y1]` holding every pulse location.
    pub fn location_box(&self) -> Fov {
        let mut b = Fov { x: [f64::INFINITY, f64::NEG_INFINITY], y: [f64::INFINITY, f64::NEG_INFINITY] };
        for p in &self.pulses {
            b.x = [b.x[0].min(p.x), b.x[1].max(p.x)];
            b.y = [b.y[0].min(p.y), b.y[1].max(p.y)];
        }
        b
    }
}

/// Sampling rates and the sample index window `⟦n1_min, n1_max⟧ × ⟦n2_min, n2_max⟧`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Sampling rate `Ωsx` (rad per unit length).
    pub omega_sx: f64,
    /// Sampling rate `Ωsy`.
    pub omega_sy: f64,
    /// Sample indices along `x`.
    pub n1: IndexRange,
    /// Sample indices along `y`.
    pub n2: IndexRange,
}

impl SamplingConfig {
    /// Configuration with positive finite rates.
    pub fn new(omega_sx: f64, omega_sy: f64, n1: IndexRange, n2: IndexRange) -> Result<Self> {
        for w in [omega_sx, omega_sy] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid(alloc::format!("sampling rates must be positive, got {w}")));
            }
        }
        Ok(Self { omega_sx, omega_sy, n1, n2 })
    }

    /// Smallest window at the given rates covering `fov` grown by the kernel's
    /// support box and the pulse half-width.
    pub fn covering(kernel: &KernelSpec, omega_sx: f64, omega_sy: f64, fov: Fov, pulse_halfwidth: f64) -> Result<Self> {
        let (hx, hy) = kernel.support_half_widths();
        let range = |r: [f64; 2], h: f64, ts: f64| {
            let lo = ((r[0] - h - pulse_halfwidth) / ts).floor() as i32;
            let hi = ((r[1] + h + pulse_halfwidth) / ts).ceil() as i32;
            IndexRange::new(lo, hi)
        };
        if !(omega_sx > 0.0 && omega_sy > 0.0) {
            return Err(Error::invalid("sampling rates must be positive"));
        }
        let n1 = range(fov.x, hx, 2.0 * PI / omega_sx)?;
        let n2 = range(fov.y, hy, 2.0 * PI / omega_sy)?;
        Self::new(omega_sx, omega_sy, n1, n2)
    }

    /// Sampling interval `Tsx = 2π/Ωsx`.
    pub fn tsx(&self) -> f64 {
        2.0 * PI / self.omega_sx
    }

    /// Sampling interval `Tsy = 2π/Ωsy`.
    pub fn tsy(&self) -> f64 {
        2.0 * PI / self.omega_sy
    }

    /// Sample positions along `x`.
    pub fn xs(&self) -> Vec<f64> {
        self.n1.iter().map(|n| n as f64 * self.tsx()).collect()
    }

    /// Sample positions along `y`.
    pub fn ys(&self) -> Vec<f64> {
        self.n2.iter().map(|n| n as f64 * self.tsy()).collect()
    }
}

/// Kernel output samples `ψ(n1·Tsx, n2·Tsy)`, rows indexed by `n1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    /// `|n1 window| × |n2 window|` sample values.
    pub values: CMatrix,
    /// Rates and index window.
    pub config: SamplingConfig,
    /// Whether the samples are real (imaginary parts exactly zero).
    pub real: bool,
}

impl SampleSet {
    /// Wraps `values`, checking the shape against the window.
    pub fn new(values: CMatrix, config: SamplingConfig, real: bool) -> Result<Self> {
        if values.nrows() != config.n1.len() || values.ncols() != config.n2.len() {
            return Err(Error::invalid(alloc::format!(
                "sample array is {}×{}, window is {}×{}",
                values.nrows(),
                values.ncols(),
                config.n1.len(),
                config.n2.len()
            )));
        }
        if real && values.iter().any(|v| v.im != 0.0) {
            return Err(Error::invalid("samples flagged real have nonzero imaginary parts"));
        }
        Ok(Self { values, config, real })
    }

    /// `ψ(n1·Tsx, n2·Tsy)`; indices must lie in the window.
    pub fn get(&self, n1: i32, n2: i32) -> Complex64 {
        self.values[(self.config.n1.offset(n1), self.config.n2.offset(n2))]
    }
}

/// Samples `ψ = f ∗ g` on the lattice of `config`.
///
/// Dirac pulses are summed exactly from the kernel's closed form. Gaussian
/// pulses go through a [`GaussianBlur`] built on the fly; reuse one with
/// [`acquire_with`] when sampling many signals through the same kernel.
///
/// When the kernel is real-valued and every amplitude is real, the imaginary
/// parts (roundoff only) are dropped and the set is flagged real.
///
/// # Errors
///
/// [`Error::SamplingRate`] when a rate is below `|K|·Ω0`, and
/// [`Error::WindowCoverage`] when the window misses part of the support of `ψ`.
pub fn acquire(signal: &FriSignal, kernel: &KernelSpec, config: &SamplingConfig) -> Result<SampleSet> {
    match signal.shape() {
        PulseShape::Dirac => acquire_with(signal, kernel, config, None),
        PulseShape::Gaussian { sigma, truncation_halfwidth } => {
            let blur = GaussianBlur::new(kernel, sigma, truncation_halfwidth)?;
            acquire_with(signal, kernel, config, Some(&blur))
        }
    }
}

/// [`acquire`] with a prebuilt Gaussian convolution engine. `blur` is required for
/// Gaussian pulses, must match the pulse shape and kernel, and is ignored for
/// Diracs.
pub fn acquire_with(
    signal: &FriSignal,
    kernel: &KernelSpec,
    config: &SamplingConfig,
    blur: Option<&GaussianBlur>,
) -> Result<SampleSet> {
    kernel.grid().check_sampling_rates(config.omega_sx, config.omega_sy)?;
    check_coverage(signal, kernel, config)?;
    let xs = config.xs();
    let ys = config.ys();
    let mut values = CMatrix::zeros(xs.len(), ys.len());
    match signal.shape() {
        PulseShape::Dirac => {
            for p in signal.pulses() {
                for (i, &x) in xs.iter().enumerate() {
                    for (j, &y) in ys.iter().enumerate() {
                        values[(i, j)] += p.gamma * kernel.spatial(x - p.x, y - p.y);
                    }
                }
            }
        }
        PulseShape::Gaussian { sigma, truncation_halfwidth } => {
            let blur = blur.ok_or_else(|| Error::invalid("Gaussian pulses need a convolution engine"))?;
            if blur.sigma() != sigma || blur.truncation_halfwidth() != truncation_halfwidth {
                return Err(Error::invalid("convolution engine was built for a different pulse shape"));
            }
            for p in signal.pulses() {
                for (i, &x) in xs.iter().enumerate() {
                    for (j, &y) in ys.iter().enumerate() {
                        values[(i, j)] += p.gamma * blur.response(x - p.x, y - p.y);
                    }
                }
            }
        }
    }
    let real = kernel.is_real_valued() && signal.has_real_amplitudes();
    if real {
        for v in values.iter_mut() {
            v.im = 0.0;
        }
    }
    SampleSet::new(values, *config, real)
}

fn check_coverage(signal: &FriSignal, kernel: &KernelSpec, config: &SamplingConfig) -> Result<()> {
    let (hx, hy) = kernel.support_half_widths();
    let hp = signal.shape().halfwidth();
    let b = signal.location_box();
    let checks = [
        (Axis::X, b.x, hx, config.n1, config.tsx()),
        (Axis::Y, b.y, hy, config.n2, config.tsy()),
    ];
    for (axis, r, h, n, ts) in checks {
        let lo = r[0] - h - hp;
        let hi = r[1] + h + hp;
        let slack = 1e-12 * ts;
        let margin = (n.min() as f64 * ts - lo).max(hi - n.max() as f64 * ts);
        if margin > slack {
            return Err(Error::WindowCoverage { axis, margin });
        }
    }
    Ok(())
}
