//! From kernel samples to sum-of-weighted-complex-exponentials measurements.
//!
//! Under alias cancellation the DTFT of the samples, evaluated on the spectral
//! grid, equals `F·G` there; dividing by the kernel and pulse responses leaves
//! `P[k1, k2] = Σ γℓ·e^{−j(k1Ω0x xℓ + k2Ω0y yℓ)}`.

use num_complex::Complex64;

use crate::kernels::KernelSpec;
use crate::signals::{PulseShape, SampleSet};
use crate::{CMatrix, Error, Result, SpectralGrid};

/// Default relative floor on `|G·H|` used by [`demodulate`].
pub const DEFAULT_SINGULARITY_FLOOR: f64 = 1e-8;

/// Measurements `P` on the spectral grid, rows indexed by `k1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwceMeasurements {
    /// `|K1| × |K2|` values.
    pub values: CMatrix,
    /// Grid the values live on.
    pub grid: SpectralGrid,
}

impl SwceMeasurements {
    /// Wraps `values`, checking shape and finiteness.
    pub fn new(values: CMatrix, grid: SpectralGrid) -> Result<Self> {
        check_shape(&values, &grid)?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("measurements must be finite"));
        }
        Ok(Self { values, grid })
    }

    /// Noiseless model `Σ γℓ·e^{−j(k1Ω0x xℓ + k2Ω0y yℓ)}` for the given pulses.
    pub fn from_pulses(grid: SpectralGrid, pulses: &[(Complex64, f64, f64)]) -> Self {
        let values = CMatrix::from_fn(grid.k1().len(), grid.k2().len(), |i, j| {
            let (wx, wy) = grid.frequency(grid.k1().min() + i as i32, grid.k2().min() + j as i32);
            pulses.iter().map(|&(g, x, y)| g * Complex64::from_polar(1.0, -(wx * x + wy * y))).sum()
        });
        Self { values, grid }
    }

    /// `P[k1, k2]`; indices must lie on the grid.
    pub fn get(&self, k1: i32, k2: i32) -> Complex64 {
        self.values[(self.grid.k1().offset(k1), self.grid.k2().offset(k2))]
    }
}

fn check_shape(values: &CMatrix, grid: &SpectralGrid) -> Result<()> {
    if values.nrows() != grid.k1().len() || values.ncols() != grid.k2().len() {
        return Err(Error::invalid(alloc::format!(
            "matrix is {}×{}, spectral grid is {}×{}",
            values.nrows(),
            values.ncols(),
            grid.k1().len(),
            grid.k2().len()
        )));
    }
    Ok(())
}

/// `F̂[k1, k2] = Tsx·Tsy·Σ ψ(n1Tsx, n2Tsy)·e^{−j(k1Ω0x n1Tsx + k2Ω0y n2Tsy)}`,
/// evaluated as `Tsx·Tsy·E1·ψ·E2ᵀ`.
///
/// # Errors
///
/// [`Error::SamplingRate`] when the sampling rates are below `|K|·Ω0`.
pub fn dtft_on_grid(samples: &SampleSet, grid: &SpectralGrid) -> Result<CMatrix> {
    let cfg = &samples.config;
    grid.check_sampling_rates(cfg.omega_sx, cfg.omega_sy)?;
    let step_x = grid.omega0x() * cfg.tsx();
    let step_y = grid.omega0y() * cfg.tsy();
    let e1 = CMatrix::from_fn(grid.k1().len(), cfg.n1.len(), |k, n| {
        let (k1, n1) = (grid.k1().min() + k as i32, cfg.n1.min() + n as i32);
        Complex64::from_polar(1.0, -step_x * (k1 as i64 * n1 as i64) as f64)
    });
    let e2t = CMatrix::from_fn(cfg.n2.len(), grid.k2().len(), |n, k| {
        let (k2, n2) = (grid.k2().min() + k as i32, cfg.n2.min() + n as i32);
        Complex64::from_polar(1.0, -step_y * (k2 as i64 * n2 as i64) as f64)
    });
    Ok(e1 * &samples.values * e2t * Complex64::new(cfg.tsx() * cfg.tsy(), 0.0))
}

/// `P = F̂ / (G̃·H)` on the grid, where `G̃` is the kernel's
/// [`transfer`](KernelSpec::transfer) and `H` the pulse transform.
///
/// # Errors
///
/// [`Error::InvalidParameter`] on a shape mismatch, and [`Error::Singularity`]
/// naming the first grid point (in row order) where `|G̃·H| < floor·max |G̃·H|`.
pub fn demodulate(
    fhat: &CMatrix,
    kernel: &KernelSpec,
    shape: &PulseShape,
    grid: &SpectralGrid,
    floor: f64,
) -> Result<SwceMeasurements> {
    check_shape(fhat, grid)?;
    let divisor = CMatrix::from_fn(grid.k1().len(), grid.k2().len(), |i, j| {
        let (wx, wy) = grid.frequency(grid.k1().min() + i as i32, grid.k2().min() + j as i32);
        kernel.transfer(wx, wy) * shape.ctft(wx, wy)
    });
    let peak = divisor.iter().map(|d| d.norm()).fold(0.0, f64::max);
    for (k1, k2, _, _) in grid.points() {
        let d = divisor[(grid.k1().offset(k1), grid.k2().offset(k2))].norm();
        let ratio = if peak > 0.0 { d / peak } else { 0.0 };
        if !(ratio >= floor) || d == 0.0 {
            return Err(Error::Singularity { k1, k2, ratio });
        }
    }
    SwceMeasurements::new(fhat.component_div(&divisor), *grid)
}

/// [`dtft_on_grid`] followed by [`demodulate`] on the kernel's own grid with the
/// default floor.
pub fn measurements(samples: &SampleSet, kernel: &KernelSpec, shape: &PulseShape) -> Result<SwceMeasurements> {
    let grid = kernel.grid();
    let fhat = dtft_on_grid(samples, grid)?;
    demodulate(&fhat, kernel, shape, grid, DEFAULT_SINGULARITY_FLOOR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{NonseparableKernel, SeparableSmsKernel};
    use crate::signals::{acquire, Fov, FriSignal, Pulse, SamplingConfig};
    use core::f64::consts::PI;

    fn setup(kernel: &KernelSpec) -> SamplingConfig {
        let (sx, sy) = kernel.grid().critical_rates();
        SamplingConfig::covering(kernel, sx, sy, Fov::UNIT, 0.0).unwrap()
    }

    #[test]
    fn single_dirac_calibration() {
        let g = SpectralGrid::symmetric(3, 3, PI / 0.99, PI / 0.99).unwrap();
        for k in [KernelSpec::from(SeparableSmsKernel::new(g, 2, 1).unwrap()), NonseparableKernel::with_unit_weights(g).into()] {
            let cfg = setup(&k);
            let sig = FriSignal::new(alloc::vec![Pulse::new(1.0, 0.37, 0.81)], PulseShape::Dirac).unwrap();
            let s = acquire(&sig, &k, &cfg).unwrap();
            let fhat = dtft_on_grid(&s, &g).unwrap();
            for (k1, k2, wx, wy) in g.points() {
                let ratio = fhat[(g.k1().offset(k1), g.k2().offset(k2))] / k.transfer(wx, wy);
                let want = Complex64::from_polar(1.0, -(wx * 0.37 + wy * 0.81));
                assert!((ratio - want).norm() < 1e-9, "{} ({k1},{k2}) {ratio} {want}", k.family());
            }
        }
    }

    #[test]
    fn zero_samples_zero_dtft() {
        let g = SpectralGrid::symmetric(1, 1, 1.0, 1.0).unwrap();
        let cfg = SamplingConfig::new(3.0, 3.0, crate::IndexRange::symmetric(4), crate::IndexRange::symmetric(4)).unwrap();
        let s = SampleSet::new(CMatrix::zeros(9, 9), cfg, true).unwrap();
        assert!(dtft_on_grid(&s, &g).unwrap().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn singular_divisor_named() {
        let g = SpectralGrid::symmetric(4, 4, 10.0, 10.0).unwrap();
        let k: KernelSpec = NonseparableKernel::with_unit_weights(g).into();
        let shape = PulseShape::gaussian(0.5).unwrap();
        let err = demodulate(&CMatrix::zeros(9, 9), &k, &shape, &g, DEFAULT_SINGULARITY_FLOOR).unwrap_err();
        match err {
            Error::Singularity { k1, k2, ratio } => {
                assert_eq!((k1, k2), (-4, -4));
                assert!(ratio < 1e-8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonseparable_divisor_is_pi_squared() {
        let g = SpectralGrid::symmetric(2, 2, 1.0, 1.0).unwrap();
        let k: KernelSpec = NonseparableKernel::with_unit_weights(g).into();
        let fhat = CMatrix::from_element(5, 5, Complex64::new(PI * PI, 0.0));
        let p = demodulate(&fhat, &k, &PulseShape::Dirac, &g, DEFAULT_SINGULARITY_FLOOR).unwrap();
        assert!(p.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-14));
    }
}
