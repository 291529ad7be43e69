use core::f64::consts::PI;

use crate::{Error, Result};

/// Nonempty contiguous range of integers `⟦min, max⟧`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexRange {
    min: i32,
    max: i32,
}

impl IndexRange {
    /// Range `⟦min, max⟧`; fails when `min > max`.
    pub fn new(min: i32, max: i32) -> Result<Self> {
        if min > max {
            return Err(Error::invalid(alloc::format!("empty index range ⟦{min}, {max}⟧")));
        }
        Ok(Self { min, max })
    }

    /// Symmetric range `⟦−half, half⟧`.
    pub fn symmetric(half: u32) -> Self {
        let h = half as i32;
        Self { min: -h, max: h }
    }

    /// Smallest index.
    pub fn min(&self) -> i32 {
        self.min
    }

    /// Largest index.
    pub fn max(&self) -> i32 {
        self.max
    }

    /// Number of indices, `|K|`.
    pub fn len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    /// Always `false`; ranges are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether `k` lies in the range.
    pub fn contains(&self, k: i32) -> bool {
        self.min <= k && k <= self.max
    }

    /// Whether the range equals its negation.
    pub fn is_symmetric(&self) -> bool {
        self.min == -self.max
    }

    /// Largest absolute index.
    pub fn max_abs(&self) -> i32 {
        self.min.abs().max(self.max.abs())
    }

    /// Position of `k` inside the range (0-based).
    pub fn offset(&self, k: i32) -> usize {
        debug_assert!(self.contains(k));
        (k - self.min) as usize
    }

    /// Iterator over the indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = i32> + Clone {
        self.min..=self.max
    }
}

/// The spectral measurement set `S = {(k1·Ω0x, k2·Ω0y)}` for `k1 ∈ K1`, `k2 ∈ K2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    k1: IndexRange,
    k2: IndexRange,
    omega0x: f64,
    omega0y: f64,
}

impl SpectralGrid {
    /// Grid with base frequencies `omega0x`, `omega0y` (rad per unit length, > 0).
    pub fn new(k1: IndexRange, k2: IndexRange, omega0x: f64, omega0y: f64) -> Result<Self> {
        for (name, w) in [("omega0x", omega0x), ("omega0y", omega0y)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(alloc::format!("{name} must be finite and positive, got {w}")));
            }
        }
        Ok(Self { k1, k2, omega0x, omega0y })
    }

    /// `K1 = ⟦−half1, half1⟧`, `K2 = ⟦−half2, half2⟧`.
    pub fn symmetric(half1: u32, half2: u32, omega0x: f64, omega0y: f64) -> Result<Self> {
        Self::new(IndexRange::symmetric(half1), IndexRange::symmetric(half2), omega0x, omega0y)
    }

    /// Index range along `x`.
    pub fn k1(&self) -> IndexRange {
        self.k1
    }

    /// Index range along `y`.
    pub fn k2(&self) -> IndexRange {
        self.k2
    }

    /// Base frequency along `x`.
    pub fn omega0x(&self) -> f64 {
        self.omega0x
    }

    /// Base frequency along `y`.
    pub fn omega0y(&self) -> f64 {
        self.omega0y
    }

    /// Period `T0x = 2π/Ω0x`.
    pub fn t0x(&self) -> f64 {
        2.0 * PI / self.omega0x
    }

    /// Period `T0y = 2π/Ω0y`.
    pub fn t0y(&self) -> f64 {
        2.0 * PI / self.omega0y
    }

    /// `|K1|·|K2|`.
    pub fn len(&self) -> usize {
        self.k1.len() * self.k2.len()
    }

    /// Always `false`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether both index ranges are symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        self.k1.is_symmetric() && self.k2.is_symmetric()
    }

    /// Minimal sampling rates `(|K1|·Ω0x, |K2|·Ω0y)`.
    pub fn critical_rates(&self) -> (f64, f64) {
        (self.k1.len() as f64 * self.omega0x, self.k2.len() as f64 * self.omega0y)
    }

    /// Frequencies `(k1·Ω0x, k2·Ω0y)` of the index pair.
    pub fn frequency(&self, k1: i32, k2: i32) -> (f64, f64) {
        (k1 as f64 * self.omega0x, k2 as f64 * self.omega0y)
    }

    /// All points of `S` as `(k1, k2, Ωx, Ωy)`, `k2` varying fastest.
    pub fn points(&self) -> impl Iterator<Item = (i32, i32, f64, f64)> + '_ {
        self.k1.iter().flat_map(move |k1| {
            self.k2.iter().map(move |k2| {
                let (wx, wy) = self.frequency(k1, k2);
                (k1, k2, wx, wy)
            })
        })
    }

    /// Checks `Ωsx ≥ |K1|·Ω0x` and `Ωsy ≥ |K2|·Ω0y`.
    pub fn check_sampling_rates(&self, omega_sx: f64, omega_sy: f64) -> Result<()> {
        let (rx, ry) = self.critical_rates();
        // relative slack so that Ωs computed as |K|·Ω0 in floating point passes
        let slack = 1e-12;
        if !(omega_sx >= rx * (1.0 - slack)) {
            return Err(Error::SamplingRate { axis: crate::Axis::X, omega_s: omega_sx, required: rx });
        }
        if !(omega_sy >= ry * (1.0 - slack)) {
            return Err(Error::SamplingRate { axis: crate::Axis::Y, omega_s: omega_sy, required: ry });
        }
        Ok(())
    }
}
