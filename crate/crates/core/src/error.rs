use alloc::string::String;
use core::fmt;

/// Coordinate axis named in configuration errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Horizontal axis (`x`, `k1`, `n1`).
    X,
    /// Vertical axis (`y`, `k2`, `n2`).
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// Errors raised by the kernel, acquisition and estimation routines.
///
/// Variants split into configuration problems (a precondition on the inputs does
/// not hold) and numerical degeneracies (the data do not support the requested
/// model). [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a documented precondition.
    InvalidParameter(String),
    /// The sampling rate along `axis` is below `|K|·Ω0` for that axis.
    SamplingRate {
        /// Offending axis.
        axis: Axis,
        /// Configured sampling rate `Ωs` (rad per unit length).
        omega_s: f64,
        /// Smallest admissible rate `|K|·Ω0`.
        required: f64,
    },
    /// The sample window does not cover the support of the kernel output.
    WindowCoverage {
        /// Offending axis.
        axis: Axis,
        /// Length (in spatial units) of the uncovered margin.
        margin: f64,
    },
    /// `|G·H|` is below the singularity floor at a point of the spectral grid.
    Singularity {
        /// Index along the first frequency axis.
        k1: i32,
        /// Index along the second frequency axis.
        k2: i32,
        /// `|G·H|` at that point divided by its maximum over the grid.
        ratio: f64,
    },
    /// Fewer measurements than the model order requires.
    InsufficientData {
        /// Minimum number of measurements.
        required: usize,
        /// Number supplied.
        available: usize,
    },
    /// Rank collapse or a singular system: the data cannot identify the model.
    Degenerate(String),
}

impl Error {
    /// `true` for numerical degeneracies, `false` for configuration problems.
    /// A vanishing kernel/pulse response counts as configuration: the grid asks
    /// for frequencies the acquisition chain cannot deliver.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SamplingRate { axis, omega_s, required } => write!(
                f,
                "sampling rate along {axis} is {omega_s} rad/unit, below the required |K|·Ω0 = {required}"
            ),
            Error::WindowCoverage { axis, margin } => write!(
                f,
                "sample window misses {margin} units of the signal support along {axis}"
            ),
            Error::Singularity { k1, k2, ratio } => write!(
                f,
                "kernel/pulse response vanishes at (k1, k2) = ({k1}, {k2}): |G·H| is {ratio:e} of its maximum"
            ),
            Error::InsufficientData { required, available } => write!(
                f,
                "need at least {required} measurements, got {available}"
            ),
            Error::Degenerate(msg) => write!(f, "degenerate signal: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Result alias for this crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
