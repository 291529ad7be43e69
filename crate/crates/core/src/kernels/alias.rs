use num_complex::Complex64;

use crate::{Error, Result, SpectralGrid};

/// Relative tolerances of [`alias_check`], both scaled by `max_S |G|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasTolerances {
    /// Largest admissible `|G|` at a shifted point.
    pub zero: f64,
    /// Smallest admissible `|G|` on the grid.
    pub nonzero: f64,
}

impl Default for AliasTolerances {
    fn default() -> Self {
        Self { zero: 1e-10, nonzero: 1e-6 }
    }
}

/// Shifted frequency `(k1·Ω0x + m1·Ωsx, k2·Ω0y + m2·Ωsy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AliasPoint {
    /// Grid index along `x`.
    pub k1: i32,
    /// Grid index along `y`.
    pub k2: i32,
    /// Shift multiple along `x`.
    pub m1: i32,
    /// Shift multiple along `y`.
    pub m2: i32,
}

/// Outcome of [`alias_check`]. Magnitudes are relative to `max_S |G|`.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasReport {
    /// Both conditions hold within tolerance.
    pub pass: bool,
    /// `max_S |G|`, the reference scale.
    pub max_on_grid: f64,
    /// `min_S |G| / max_S |G|`.
    pub min_on_grid: f64,
    /// Grid point attaining the minimum.
    pub weakest_grid_point: (i32, i32),
    /// `max |G(shifted)| / max_S |G|` over every checked shift.
    pub worst_zero_violation: f64,
    /// Shifted point attaining the worst violation.
    pub worst_zero_at: Option<AliasPoint>,
    /// Number of shifted points evaluated.
    pub shifts_checked: usize,
}

/// Checks the alias-cancellation conditions of a frequency response on `grid`:
/// `|G| ≥ tol.nonzero·max` on every grid point and `|G| ≤ tol.zero·max` at every
/// shifted point with `max(|m1|, |m2|) ≤ m_max`, `(m1, m2) ≠ (0, 0)`.
///
/// Mixed shifts (one of `m1, m2` zero) are included.
///
/// # Errors
///
/// [`Error::SamplingRate`] when `Ωs < |K|·Ω0` on an axis, and
/// [`Error::InvalidParameter`] for `m_max = 0` or nonpositive tolerances.
pub fn alias_check<F>(
    freq: F,
    grid: &SpectralGrid,
    omega_sx: f64,
    omega_sy: f64,
    m_max: u32,
    tol: AliasTolerances,
) -> Result<AliasReport>
where
    F: Fn(f64, f64) -> Complex64,
{
    grid.check_sampling_rates(omega_sx, omega_sy)?;
    if m_max == 0 {
        return Err(Error::invalid("m_max must be at least 1"));
    }
    if !(tol.zero > 0.0 && tol.nonzero > 0.0) {
        return Err(Error::invalid("alias tolerances must be positive"));
    }

    let mut max_on = 0.0f64;
    let mut min_on = f64::INFINITY;
    let mut weakest = (grid.k1().min(), grid.k2().min());
    for (k1, k2, wx, wy) in grid.points() {
        let a = freq(wx, wy).norm();
        max_on = max_on.max(a);
        if a < min_on {
            min_on = a;
            weakest = (k1, k2);
        }
    }

    let m = m_max as i32;
    let mut worst = 0.0f64;
    let mut worst_at = None;
    let mut count = 0;
    for (k1, k2, wx, wy) in grid.points() {
        for m1 in -m..=m {
            for m2 in -m..=m {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let a = freq(wx + m1 as f64 * omega_sx, wy + m2 as f64 * omega_sy).norm();
                count += 1;
                if a > worst || worst_at.is_none() {
                    worst = a;
                    worst_at = Some(AliasPoint { k1, k2, m1, m2 });
                }
            }
        }
    }

    let (min_rel, worst_rel) = if max_on > 0.0 {
        (min_on / max_on, worst / max_on)
    } else {
        (0.0, f64::INFINITY)
    };
    let pass = max_on > 0.0 && max_on.is_finite() && min_rel >= tol.nonzero && worst_rel <= tol.zero;
    Ok(AliasReport {
        pass,
        max_on_grid: max_on,
        min_on_grid: min_rel,
        weakest_grid_point: weakest,
        worst_zero_violation: worst_rel,
        worst_zero_at: worst_at,
        shifts_checked: count,
    })
}
