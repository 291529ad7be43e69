use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::Location;
use crate::spectral::SwceMeasurements;
use crate::linalg::Svd;
use crate::{CMatrix, Error, Result};

use super::pencil::RANK_TOLERANCE;

/// Least-squares amplitudes of `P ≈ Σ γℓ·e^{−j(k1Ω0x xℓ + k2Ω0y yℓ)}` for fixed
/// locations, with the relative residual `‖P − model‖/‖P‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeFit {
    /// One amplitude per location, in the same order.
    pub amplitudes: Vec<Complex64>,
    /// Relative residual (0 for an all-zero `P` fitted exactly).
    pub residual: f64,
}

/// 2-D Vandermonde matrix with rows `(k1, k2)` (k2 fastest) and one column per
/// location.
pub fn vandermonde_2d(p: &SwceMeasurements, locations: &[Location]) -> CMatrix {
    let g = &p.grid;
    let n2 = g.k2().len();
    CMatrix::from_fn(g.len(), locations.len(), |r, c| {
        let (wx, wy) = g.frequency(g.k1().min() + (r / n2) as i32, g.k2().min() + (r % n2) as i32);
        let l = locations[c];
        Complex64::from_polar(1.0, -(wx * l.x + wy * l.y))
    })
}

/// Fits amplitudes for the given locations by least squares.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for an empty location list, and
/// [`Error::Degenerate`] when the Vandermonde matrix is rank deficient
/// (duplicate locations modulo the grid periods).
pub fn amplitudes_ls(p: &SwceMeasurements, locations: &[Location]) -> Result<AmplitudeFit> {
    if locations.is_empty() {
        return Err(Error::invalid("at least one location is required"));
    }
    let v = vandermonde_2d(p, locations);
    let n2 = p.grid.k2().len();
    let rhs = DVector::from_fn(p.grid.len(), |r, _| p.values[(r / n2, r % n2)]);
    let svd = Svd::new(&v)?;
    let smin = svd.s.last().copied().unwrap_or(0.0);
    if locations.len() > p.grid.len() || !(smin > RANK_TOLERANCE * svd.s[0]) {
        return Err(Error::degenerate("location Vandermonde matrix is rank deficient (duplicate locations?)"));
    }
    let gamma = svd.solve(&rhs, 0.0);
    let model = &v * &gamma;
    let norm_p = rhs.norm();
    let err = (&rhs - model).norm();
    let residual = if norm_p > 0.0 { err / norm_p } else { err };
    Ok(AmplitudeFit { amplitudes: gamma.iter().copied().collect(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SpectralGrid;
    use core::f64::consts::PI;

    fn measurements(pulses: &[(Complex64, f64, f64)]) -> SwceMeasurements {
        SwceMeasurements::from_pulses(SpectralGrid::symmetric(3, 3, PI / 0.99, PI / 0.99).unwrap(), pulses)
    }

    #[test]
    fn exact_model_recovered() {
        let truth = [(Complex64::new(0.7, 0.0), 0.2, 0.9), (Complex64::new(0.3, -0.1), 0.6, 0.1)];
        let p = measurements(&truth);
        let locs: Vec<Location> = truth.iter().map(|t| Location { x: t.1, y: t.2 }).collect();
        let fit = amplitudes_ls(&p, &locs).unwrap();
        assert!(fit.residual < 1e-12);
        for (a, t) in fit.amplitudes.iter().zip(&truth) {
            assert!((a - t.0).norm() < 1e-12);
        }
        let moved: Vec<Location> = locs.iter().map(|l| Location { x: l.x + 1e-3, y: l.y }).collect();
        assert!(amplitudes_ls(&p, &moved).unwrap().residual > fit.residual);
    }

    #[test]
    fn duplicate_locations_rejected() {
        let p = measurements(&[(Complex64::new(1.0, 0.0), 0.5, 0.5)]);
        let locs = [Location { x: 0.5, y: 0.5 }, Location { x: 0.5, y: 0.5 }];
        assert!(matches!(amplitudes_ls(&p, &locs), Err(Error::Degenerate(_))));
    }
}
