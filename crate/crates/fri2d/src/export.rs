//! Kernel tables for plotting.

use std::path::Path;

use fri2d_core::kernels::KernelSpec;

use crate::error::{CliError, Result};
use crate::io::{write_kernel_csv, KernelDomain, KernelRow};

/// What part of a kernel to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableDomain {
    /// `g(x, y)` on a square lattice covering the support box.
    Spatial,
    /// `G(Ωx, Ωy)` on a square lattice over `±(max|k| + 2)·Ω0`.
    Frequency,
    /// `G` at the spectral grid points only.
    Grid,
}

fn linspace(half: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let step = 2.0 * half / (points - 1) as f64;
    (0..points).map(|i| -half + i as f64 * step).collect()
}

/// Tabulates `kernel`; rows are ordered with the first coordinate outermost.
///
/// `points` is the lattice size per axis and is ignored for [`TableDomain::Grid`].
pub fn kernel_table(kernel: &KernelSpec, domain: TableDomain, points: usize) -> Result<(KernelDomain, Vec<KernelRow>)> {
    if points == 0 && domain != TableDomain::Grid {
        return Err(CliError::Config("points must be at least 1".into()));
    }
    let g = kernel.grid();
    let rows = match domain {
        TableDomain::Spatial => {
            let (hx, hy) = kernel.support_half_widths();
            let (xs, ys) = (linspace(hx, points), linspace(hy, points));
            xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y, kernel.spatial(x, y)))).collect()
        }
        TableDomain::Frequency => {
            let bx = (g.k1().max_abs() + 2) as f64 * g.omega0x();
            let by = (g.k2().max_abs() + 2) as f64 * g.omega0y();
            let (wx, wy) = (linspace(bx, points), linspace(by, points));
            wx.iter().flat_map(|&a| wy.iter().map(move |&b| (a, b, kernel.freq(a, b)))).collect()
        }
        TableDomain::Grid => g
            .points()
            .map(|(_, _, a, b)| (a, b, kernel.freq(a, b)))
            .collect(),
    };
    let labels = if domain == TableDomain::Spatial { KernelDomain::Spatial } else { KernelDomain::Frequency };
    Ok((labels, rows))
}

/// Writes [`kernel_table`] to `path` as CSV.
pub fn emit_kernel(kernel: &KernelSpec, domain: TableDomain, points: usize, path: &Path) -> Result<()> {
    let (labels, rows) = kernel_table(kernel, domain, points)?;
    write_kernel_csv(path, labels, &rows)
}
