//! JSON configuration of kernels and experiments.

use std::f64::consts::PI;
use std::path::Path;

use fri2d_core::kernels::{KernelSpec, NonseparableKernel, SeparableSmsKernel};
use fri2d_core::signals::{Fov, PulseShape};
use fri2d_core::{CMatrix, Complex64, IndexRange, SpectralGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Base frequency `π/0.99` used by both experiments.
pub const DEFAULT_OMEGA0: f64 = PI / 0.99;

/// Kernel family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// Separable SMS kernel.
    Separable,
    /// Rotated nonseparable kernel.
    Nonseparable,
}

/// Spectral grid `⟦k1⟧ × ⟦k2⟧` with base frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// `[k1_min, k1_max]`.
    pub k1: [i32; 2],
    /// `[k2_min, k2_max]`.
    pub k2: [i32; 2],
    /// `Ω0x` in rad per unit length.
    pub omega0x: f64,
    /// `Ω0y` in rad per unit length.
    pub omega0y: f64,
}

impl GridConfig {
    /// Symmetric grid `⟦−half, half⟧²` with a common base frequency.
    pub fn symmetric(half: i32, omega0: f64) -> Self {
        Self { k1: [-half, half], k2: [-half, half], omega0x: omega0, omega0y: omega0 }
    }

    /// Validated core grid.
    pub fn build(&self) -> Result<SpectralGrid> {
        Ok(SpectralGrid::new(
            IndexRange::new(self.k1[0], self.k1[1])?,
            IndexRange::new(self.k2[0], self.k2[1])?,
            self.omega0x,
            self.omega0y,
        )?)
    }
}

fn one() -> u32 {
    1
}

/// Kernel family and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    /// Family.
    pub family: KernelFamily,
    /// Spectral grid.
    pub grid: GridConfig,
    /// Spline order along `x` (separable only).
    #[serde(default = "one")]
    pub r1: u32,
    /// Spline order along `y` (separable only).
    #[serde(default = "one")]
    pub r2: u32,
    /// Nonseparable weights as `[re, im]` pairs, rows indexed by `k1`; all ones
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<[f64; 2]>>>,
}

impl KernelConfig {
    /// Nonseparable kernel with unit weights on `⟦−half, half⟧²`.
    pub fn nonseparable(half: i32, omega0: f64) -> Self {
        Self { family: KernelFamily::Nonseparable, grid: GridConfig::symmetric(half, omega0), r1: 1, r2: 1, q: None }
    }

    /// Separable SMS kernel of orders `(r1, r2)` on `⟦−half, half⟧²`.
    pub fn separable(half: i32, omega0: f64, r1: u32, r2: u32) -> Self {
        Self { family: KernelFamily::Separable, grid: GridConfig::symmetric(half, omega0), r1, r2, q: None }
    }

    /// Validated core kernel.
    pub fn build(&self) -> Result<KernelSpec> {
        let grid = self.grid.build()?;
        match self.family {
            KernelFamily::Separable => Ok(SeparableSmsKernel::new(grid, self.r1, self.r2)?.into()),
            KernelFamily::Nonseparable => match &self.q {
                None => Ok(NonseparableKernel::with_unit_weights(grid).into()),
                Some(rows) => {
                    let (n1, n2) = (grid.k1().len(), grid.k2().len());
                    if rows.len() != n1 || rows.iter().any(|r| r.len() != n2) {
                        return Err(CliError::Config(format!("q must be a {n1}×{n2} array of [re, im] pairs")));
                    }
                    let q = CMatrix::from_fn(n1, n2, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                    Ok(NonseparableKernel::new(grid, q)?.into())
                }
            },
        }
    }
}

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Dirac impulses, noiseless by default.
    Dirac,
    /// Truncated Gaussian blobs with white noise.
    Blobs,
}

/// Pulse given explicitly instead of drawn at random.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPulse {
    /// Real amplitude.
    pub gamma: f64,
    /// Location along `x`.
    pub x: f64,
    /// Location along `y`.
    pub y: f64,
}

/// Fully resolved experiment configuration; echoed verbatim in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Dirac or blob experiment.
    pub kind: ExperimentKind,
    /// Number of pulses `L`.
    pub pulses: usize,
    /// Sampling kernel.
    pub kernel: KernelConfig,
    /// Integer factor `c` in `Ωs = c·|K|·Ω0` on both axes.
    pub oversampling: u32,
    /// SNR of the samples in dB; absent means noiseless.
    pub snr_db: Option<f64>,
    /// Number of Monte-Carlo trials.
    pub trials: usize,
    /// Base seed; trial `t` uses `seed + t`.
    pub seed: u64,
    /// Gaussian standard deviation (blobs only).
    pub sigma: Option<f64>,
    /// Gaussian truncation half-width in units of `σ` (blobs only).
    pub truncation_sigmas: f64,
    /// Amplitudes are drawn uniformly from `[lo, hi]`.
    pub amplitude_range: [f64; 2],
    /// Locations are drawn uniformly from `[x0, x1] × [y0, y1]`.
    pub fov: [[f64; 2]; 2],
    /// Explicit pulses used in every trial instead of random draws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_pulses: Option<Vec<FixedPulse>>,
}

impl ExperimentConfig {
    /// Four Diracs, nonseparable kernel on `⟦−4, 4⟧²`, `Ω0 = π/0.99`, critical
    /// sampling, no noise, ten trials.
    pub fn default_dirac() -> Self {
        Self {
            kind: ExperimentKind::Dirac,
            pulses: 4,
            kernel: KernelConfig::nonseparable(4, DEFAULT_OMEGA0),
            oversampling: 1,
            snr_db: None,
            trials: 10,
            seed: 1,
            sigma: None,
            truncation_sigmas: fri2d_core::signals::DEFAULT_TRUNCATION_SIGMAS,
            amplitude_range: [0.0, 1.0],
            fov: [[0.0, 1.0], [0.0, 1.0]],
            fixed_pulses: None,
        }
    }

    /// Three unit-amplitude Gaussian blobs (`σ = 0.02`), nonseparable kernel on
    /// `⟦−15, 15⟧²`, `Ωs = 31·Ω0`, 15 dB SNR, fifty trials.
    pub fn default_blobs() -> Self {
        Self {
            kind: ExperimentKind::Blobs,
            pulses: 3,
            kernel: KernelConfig::nonseparable(15, DEFAULT_OMEGA0),
            snr_db: Some(15.0),
            trials: 50,
            sigma: Some(0.02),
            amplitude_range: [1.0, 1.0],
            ..Self::default_dirac()
        }
    }

    /// Default configuration of the given kind.
    pub fn default_for(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::Dirac => Self::default_dirac(),
            ExperimentKind::Blobs => Self::default_blobs(),
        }
    }

    /// Reads a configuration from a JSON file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
    }

    /// Pulse shape implied by the kind.
    pub fn shape(&self) -> Result<PulseShape> {
        match self.kind {
            ExperimentKind::Dirac => Ok(PulseShape::Dirac),
            ExperimentKind::Blobs => {
                let sigma = self.sigma.ok_or_else(|| CliError::Config("blob experiments need sigma".into()))?;
                Ok(PulseShape::truncated_gaussian(sigma, self.truncation_sigmas * sigma)?)
            }
        }
    }

    /// Field of view.
    pub fn field_of_view(&self) -> Fov {
        Fov { x: self.fov[0], y: self.fov[1] }
    }

    /// Sampling rates `c·|K|·Ω0`.
    pub fn sampling_rates(&self, kernel: &KernelSpec) -> (f64, f64) {
        let (sx, sy) = kernel.grid().critical_rates();
        let c = self.oversampling as f64;
        (c * sx, c * sy)
    }

    /// Checks the fields that no core routine validates.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.pulses == 0 {
            return bad("pulses must be at least 1");
        }
        if self.oversampling == 0 {
            return bad("oversampling must be at least 1");
        }
        if !(self.amplitude_range[0] <= self.amplitude_range[1]) {
            return bad("amplitude_range must satisfy lo ≤ hi");
        }
        for r in self.fov {
            if !(r[0] < r[1]) {
                return bad("field of view must have positive extent");
            }
        }
        if let Some(s) = self.snr_db {
            if s.is_nan() {
                return bad("snr_db must be a number");
            }
        }
        if let Some(p) = &self.fixed_pulses {
            if p.len() != self.pulses {
                return bad("fixed_pulses must list exactly `pulses` entries");
            }
        }
        Ok(())
    }
}
