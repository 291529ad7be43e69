//! Recovery of pulse locations and amplitudes from the measurements `P`.
//!
//! Each axis gets a matrix pencil on the stacked Hankel matrices of all rows (or
//! columns) of `P`; the per-axis poles are paired through the least-squares
//! amplitude matrix `C` of the separable model `P = A·C·Bᵀ`, using a maximum-weight
//! assignment on `|C|`. A Prony / annihilating-filter solver is provided as an
//! independent reference.

mod amplitudes;
mod assignment;
mod pencil;
mod prony;

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use amplitudes::{amplitudes_ls, vandermonde_2d, AmplitudeFit};
pub use assignment::max_weight_assignment;
pub use pencil::{matrix_pencil_1d, RANK_TOLERANCE};
pub use prony::prony_oracle;

use crate::linalg::Svd;
use crate::spectral::SwceMeasurements;
use crate::{CMatrix, Error, IndexRange, Result};

/// Relative gap below which the two best scores of a row of `|C|` are reported as
/// an ambiguous pairing.
pub const AMBIGUITY_TOLERANCE: f64 = 1e-3;

/// Estimated pulse location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    /// Coordinate along `x`.
    pub x: f64,
    /// Coordinate along `y`.
    pub y: f64,
}

/// Intermediate quantities of [`estimate_2d`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Distinct poles found along `x` (unit modulus).
    pub x_poles: Vec<Complex64>,
    /// Distinct poles found along `y`.
    pub y_poles: Vec<Complex64>,
    /// `(x-pole index, y-pole index)` for each estimated pulse.
    pub pairs: Vec<(usize, usize)>,
    /// Some row of `|C|` had its two largest entries within
    /// [`AMBIGUITY_TOLERANCE`] of each other.
    pub ambiguous_pairing: bool,
}

/// Output of [`estimate_2d`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    /// Locations wrapped into `[0, T0x) × [0, T0y)`, sorted by `x` then `y`.
    pub locations: Vec<Location>,
    /// Least-squares amplitudes, one per location.
    pub amplitudes: Vec<Complex64>,
    /// `‖P − model‖/‖P‖` of the fitted model.
    pub residual: f64,
    /// `|C|`, rows `x`-poles and columns `y`-poles. It is `L × L` unless an axis
    /// has repeated coordinates, which shrinks that dimension.
    pub pairing_matrix: DMatrix<f64>,
    /// Intermediate quantities.
    pub diagnostics: Diagnostics,
}

/// Wraps `v` into `[0, period)`.
pub fn wrap(v: f64, period: f64) -> f64 {
    let r = v - period * (v / period).floor();
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Recovers `L` pulses from the measurements.
///
/// Along `x` the Hankel matrices `H[r, c] = P[k1_min + r + c, k2]` of every column
/// `k2` are stacked (pencil parameter `⌊|K1|/2⌋`) and reduced to at most `L`
/// singular vectors above the rank tolerance, so an axis on which pulses share a
/// coordinate yields fewer poles. The `y` axis is handled the same way on rows.
/// Pairs are the maximum-weight assignment on `|C|`; if an axis has fewer poles
/// than `L`, further pairs are added greedily, first those covering a pole not yet
/// used, then by score, ties broken by `(row, column)`. The `L` largest entries
/// of `|C|` form a second candidate pairing, which can reuse a pole that two
/// nearly aligned pulses share; whichever candidate leaves the smaller
/// least-squares residual is returned.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for `L = 0`, [`Error::InsufficientData`] when
/// `|K1|` or `|K2|` is below `2L + 1`, [`Error::Degenerate`] for all-zero or
/// otherwise unusable measurements.
pub fn estimate_2d(p: &SwceMeasurements, l: usize) -> Result<EstimationResult> {
    if l == 0 {
        return Err(Error::invalid("model order L must be at least 1"));
    }
    let g = p.grid;
    let need = 2 * l + 1;
    for len in [g.k1().len(), g.k2().len()] {
        if len < need {
            return Err(Error::InsufficientData { required: need, available: len });
        }
    }

    let x_poles = axis_poles(&p.values, l)?;
    let y_poles = axis_poles(&p.values.transpose(), l)?;

    let a = vandermonde_1d(&x_poles, g.k1());
    let b = vandermonde_1d(&y_poles, g.k2());
    let a_pinv = Svd::new(&a)?.pseudo_inverse(0.0);
    let b_pinv = Svd::new(&b.transpose())?.pseudo_inverse(0.0);
    let c = a_pinv * &p.values * b_pinv;
    let scores = c.map(|z| z.norm());

    let ambiguous = scores.row_iter().any(|row| {
        let mut v: Vec<f64> = row.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v.len() > 1 && v[0] > 0.0 && (v[0] - v[1]) <= AMBIGUITY_TOLERANCE * v[0]
    });

    // One-to-one assignment first; the strongest entries of |C| regardless of
    // rows are the alternative when two pulses share (or nearly share) a pole
    // that the pencil returned only once. The better least-squares fit wins.
    type Candidate = (Vec<(Location, (usize, usize))>, AmplitudeFit);
    let mut best: Option<Candidate> = None;
    let mut first_err = None;
    for pairs in [pair_poles(&scores, l), strongest_entries(&scores, l)] {
        let located = locate(&pairs, &x_poles, &y_poles, &g);
        let locations: Vec<Location> = located.iter().map(|e| e.0).collect();
        match amplitudes_ls(p, &locations) {
            Ok(fit) => {
                if best.as_ref().is_none_or(|b| fit.residual < b.1.residual) {
                    best = Some((located, fit));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let (located, fit) = match (best, first_err) {
        (Some(b), _) => b,
        (None, Some(e)) => return Err(e),
        (None, None) => unreachable!("two candidates are always tried"),
    };
    let locations: Vec<Location> = located.iter().map(|e| e.0).collect();

    Ok(EstimationResult {
        locations,
        amplitudes: fit.amplitudes,
        residual: fit.residual,
        pairing_matrix: scores,
        diagnostics: Diagnostics {
            x_poles,
            y_poles,
            pairs: located.iter().map(|e| e.1).collect(),
            ambiguous_pairing: ambiguous,
        },
    })
}

fn locate(
    pairs: &[(usize, usize)],
    x_poles: &[Complex64],
    y_poles: &[Complex64],
    g: &crate::SpectralGrid,
) -> Vec<(Location, (usize, usize))> {
    let mut located: Vec<(Location, (usize, usize))> = pairs
        .iter()
        .map(|&(i, j)| {
            let loc = Location {
                x: wrap(-x_poles[i].arg() / g.omega0x(), g.t0x()),
                y: wrap(-y_poles[j].arg() / g.omega0y(), g.t0y()),
            };
            (loc, (i, j))
        })
        .collect();
    located.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));
    located
}

// The `l` largest entries, ties broken by (row, column).
fn strongest_entries(scores: &DMatrix<f64>, l: usize) -> Vec<(usize, usize)> {
    let (nr, nc) = scores.shape();
    let mut all: Vec<(usize, usize)> = (0..nr).flat_map(|i| (0..nc).map(move |j| (i, j))).collect();
    all.sort_by(|a, b| scores[*b].total_cmp(&scores[*a]).then(a.cmp(b)));
    all.truncate(l);
    all
}

// Poles along the row index of `values`, projected onto the unit circle.
fn axis_poles(values: &CMatrix, l: usize) -> Result<Vec<Complex64>> {
    let (n, cols) = values.shape();
    let m = n / 2;
    let rows = n - m;
    let mut h = CMatrix::zeros(rows * cols, m + 1);
    for col in 0..cols {
        for r in 0..rows {
            for c in 0..=m {
                h[(col * rows + r, c)] = values[(r + c, col)];
            }
        }
    }
    let (w, sv) = pencil::signal_subspace(h, l)?;
    let rank = sv.iter().take(l).filter(|&&s| s > RANK_TOLERANCE * sv[0]).count();
    let w = w.columns(0, rank).into_owned();
    let poles = pencil::shift_invariance_poles(&w)?;
    Ok(poles
        .into_iter()
        .map(|u| if u.norm() > 0.0 { u / u.norm() } else { Complex64::new(1.0, 0.0) })
        .collect())
}

// V[k, i] = u_i^k for k over `range` (absolute indices).
fn vandermonde_1d(poles: &[Complex64], range: IndexRange) -> CMatrix {
    CMatrix::from_fn(range.len(), poles.len(), |r, c| {
        let k = range.min() + r as i32;
        Complex64::from_polar(1.0, poles[c].arg() * k as f64)
    })
}

fn pair_poles(scores: &DMatrix<f64>, l: usize) -> Vec<(usize, usize)> {
    let mut pairs = max_weight_assignment(scores);
    let (nr, nc) = scores.shape();
    while pairs.len() < l && pairs.len() < nr * nc {
        let mut best: Option<((bool, f64), (usize, usize))> = None;
        for i in 0..nr {
            for j in 0..nc {
                if pairs.contains(&(i, j)) {
                    continue;
                }
                let covers = !pairs.iter().any(|&(a, _)| a == i) || !pairs.iter().any(|&(_, b)| b == j);
                let key = (covers, scores[(i, j)]);
                let better = match best {
                    None => true,
                    Some((k, _)) => key.0 && !k.0 || (key.0 == k.0 && key.1 > k.1),
                };
                if better {
                    best = Some((key, (i, j)));
                }
            }
        }
        match best {
            Some((_, pair)) => pairs.push(pair),
            None => break,
        }
    }
    pairs
}

/// Location that `u = e^{−jΩ0·t}` encodes, wrapped into `[0, 2π/Ω0)`.
pub fn pole_to_location(u: Complex64, omega0: f64) -> f64 {
    wrap(-u.arg() / omega0, 2.0 * PI / omega0)
}
