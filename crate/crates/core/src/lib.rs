//! Compactly supported sampling kernels for two-dimensional finite-rate-of-innovation
//! (FRI) signals, together with the acquisition model and the 2-D harmonic retrieval
//! that recovers pulse locations from the kernel samples.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure function
//! of its inputs; file formats, the CLI and the experiment drivers live in the `fri2d`
//! companion crate.
//!
//! Pipeline overview:
//!
//! 1. [`kernels`]: separable sum-of-modulated-spline (SMS) kernels and the rotated
//!    nonseparable kernel, in both the spatial and the frequency domain, plus the
//!    numerical admissibility checks (alias cancellation, transform pairs,
//!    exponential reproduction).
//! 2. [`signals`]: pulse streams `f = Σ γ h(· − p)`, their spectra and the sampled
//!    kernel output `ψ = f ∗ g` on a rectangular lattice, with optional white noise.
//! 3. [`spectral`]: DTFT of the samples on the spectral grid and division by the
//!    kernel and pulse responses, giving the sum-of-weighted-exponentials measurements.
//! 4. [`estimation`]: per-axis matrix pencil, amplitude-matrix pairing and
//!    least-squares amplitudes.

#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod estimation;
mod grid;
mod linalg;
pub mod kernels;
pub mod quadrature;
pub mod signals;
pub mod spectral;

pub use error::{Axis, Error, Result};
pub use grid::{IndexRange, SpectralGrid};
pub use num_complex::Complex64;

/// Dense complex matrix used for sample arrays and spectral measurements.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
