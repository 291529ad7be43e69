//! CSV and JSON file formats.
//!
//! Every CSV has a header row and writes doubles with 17 significant digits.
//! Sample and spectrum CSVs carry a JSON sidecar with the same stem.

use std::fs::File;
use std::path::{Path, PathBuf};

use fri2d_core::estimation::EstimationResult;
use fri2d_core::signals::{SampleSet, SamplingConfig};
use fri2d_core::spectral::SwceMeasurements;
use fri2d_core::{CMatrix, Complex64, IndexRange};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::{GridConfig, KernelConfig};
use crate::experiments::{ExperimentReport, PulseRecord};
use crate::error::{CliError, Result};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Path of the JSON sidecar belonging to `csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `value` as pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json { path: path.into(), source })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|source| CliError::Csv { path: path.into(), source })
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let err = |source| CliError::Csv { path: path.into(), source };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let err = |source| CliError::Csv { path: path.into(), source };
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    let found: Vec<&str> = r.headers().map_err(err)?.iter().collect();
    if found != header {
        return Err(CliError::Config(format!("{}: expected header {}", path.display(), header.join(","))));
    }
    r.records().map(|rec| rec.map(|rec| rec.iter().map(str::to_owned).collect()).map_err(err)).collect()
}

fn parse<T: std::str::FromStr>(path: &Path, field: &str) -> Result<T> {
    field.trim().parse().map_err(|_| CliError::Config(format!("{}: cannot parse `{field}`", path.display())))
}

/// One kernel table row: two coordinates and the complex value.
pub type KernelRow = (f64, f64, Complex64);

/// Coordinate labels of a kernel table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDomain {
    /// `x,y,re,im`.
    Spatial,
    /// `omega_x,omega_y,re,im`.
    Frequency,
}

impl KernelDomain {
    fn header(self) -> [&'static str; 4] {
        match self {
            KernelDomain::Spatial => ["x", "y", "re", "im"],
            KernelDomain::Frequency => ["omega_x", "omega_y", "re", "im"],
        }
    }
}

/// Writes a kernel table, one row per `(a, b, value)` in the order given.
pub fn write_kernel_csv(path: &Path, domain: KernelDomain, rows: &[KernelRow]) -> Result<()> {
    write_rows(path, &domain.header(), rows.iter().map(|&(a, b, v)| vec![fmt(a), fmt(b), fmt(v.re), fmt(v.im)]))
}

/// Reads a kernel table written by [`write_kernel_csv`].
pub fn read_kernel_csv(path: &Path, domain: KernelDomain) -> Result<Vec<KernelRow>> {
    read_rows(path, &domain.header())?
        .iter()
        .map(|r| {
            Ok((parse(path, &r[0])?, parse(path, &r[1])?, Complex64::new(parse(path, &r[2])?, parse(path, &r[3])?)))
        })
        .collect()
}

/// Where a sample set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Kernel the samples went through.
    pub kernel: KernelConfig,
    /// Gaussian `σ`, absent for Diracs.
    pub sigma: Option<f64>,
    /// Gaussian truncation half-width.
    pub truncation_halfwidth: Option<f64>,
    /// Ground-truth pulses.
    pub pulses: Vec<PulseRecord>,
    /// Noise SNR in dB, absent when noiseless.
    pub snr_db: Option<f64>,
    /// Seed of the draw.
    pub seed: u64,
}

/// Sidecar of a sample CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesMeta {
    /// `Ωsx`.
    pub omega_sx: f64,
    /// `Ωsy`.
    pub omega_sy: f64,
    /// `[n1_min, n1_max]`.
    pub n1: [i32; 2],
    /// `[n2_min, n2_max]`.
    pub n2: [i32; 2],
    /// Samples are real.
    pub real: bool,
    /// Optional generation record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

const SAMPLES_HEADER: [&str; 4] = ["n1", "n2", "re", "im"];
const SPECTRUM_HEADER: [&str; 4] = ["k1", "k2", "re", "im"];

/// Writes `n1,n2,re,im` rows (n1 outer) and the sidecar.
pub fn write_samples(path: &Path, samples: &SampleSet, provenance: Option<Provenance>) -> Result<()> {
    let c = &samples.config;
    let rows = c.n1.iter().flat_map(|a| {
        c.n2.iter().map(move |b| {
            let v = samples.get(a, b);
            vec![a.to_string(), b.to_string(), fmt(v.re), fmt(v.im)]
        })
    });
    write_rows(path, &SAMPLES_HEADER, rows)?;
    let meta = SamplesMeta {
        omega_sx: c.omega_sx,
        omega_sy: c.omega_sy,
        n1: [c.n1.min(), c.n1.max()],
        n2: [c.n2.min(), c.n2.max()],
        real: samples.real,
        provenance,
    };
    write_json(&sidecar_path(path), &meta)
}

fn fill_table(path: &Path, rows: &[Vec<String>], r1: IndexRange, r2: IndexRange) -> Result<CMatrix> {
    let mut values = CMatrix::zeros(r1.len(), r2.len());
    let mut seen = vec![false; r1.len() * r2.len()];
    for r in rows {
        let (a, b): (i32, i32) = (parse(path, &r[0])?, parse(path, &r[1])?);
        if !r1.contains(a) || !r2.contains(b) {
            return Err(CliError::Config(format!("{}: index ({a}, {b}) outside the declared window", path.display())));
        }
        let (i, j) = (r1.offset(a), r2.offset(b));
        values[(i, j)] = Complex64::new(parse(path, &r[2])?, parse(path, &r[3])?);
        seen[i * r2.len() + j] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(CliError::Config(format!("{}: table does not cover the declared window", path.display())));
    }
    Ok(values)
}

/// Reads a sample CSV and its sidecar.
pub fn read_samples(path: &Path) -> Result<(SampleSet, SamplesMeta)> {
    let meta: SamplesMeta = read_json(&sidecar_path(path))?;
    let n1 = IndexRange::new(meta.n1[0], meta.n1[1])?;
    let n2 = IndexRange::new(meta.n2[0], meta.n2[1])?;
    let config = SamplingConfig::new(meta.omega_sx, meta.omega_sy, n1, n2)?;
    let values = fill_table(path, &read_rows(path, &SAMPLES_HEADER)?, n1, n2)?;
    Ok((SampleSet::new(values, config, meta.real)?, meta))
}

/// Sidecar of a spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumMeta {
    /// Grid of the measurements.
    pub grid: GridConfig,
}

/// Writes `k1,k2,re,im` rows (k1 outer) and the sidecar.
pub fn write_spectrum(path: &Path, p: &SwceMeasurements) -> Result<()> {
    let g = p.grid;
    let rows = g.k1().iter().flat_map(|a| {
        g.k2().iter().map(move |b| {
            let v = p.get(a, b);
            vec![a.to_string(), b.to_string(), fmt(v.re), fmt(v.im)]
        })
    });
    write_rows(path, &SPECTRUM_HEADER, rows)?;
    let grid = GridConfig {
        k1: [g.k1().min(), g.k1().max()],
        k2: [g.k2().min(), g.k2().max()],
        omega0x: g.omega0x(),
        omega0y: g.omega0y(),
    };
    write_json(&sidecar_path(path), &SpectrumMeta { grid })
}

/// Reads a spectrum CSV and its sidecar.
pub fn read_spectrum(path: &Path) -> Result<SwceMeasurements> {
    let meta: SpectrumMeta = read_json(&sidecar_path(path))?;
    let grid = meta.grid.build()?;
    let values = fill_table(path, &read_rows(path, &SPECTRUM_HEADER)?, grid.k1(), grid.k2())?;
    Ok(SwceMeasurements::new(values, grid)?)
}

/// Serializable form of an estimation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationRecord {
    /// `[x, y]` per pulse.
    pub locations: Vec<[f64; 2]>,
    /// `[re, im]` per pulse.
    pub amplitudes: Vec<[f64; 2]>,
    /// Relative model residual.
    pub residual: f64,
    /// Rows of `|C|`.
    pub pairing_matrix: Vec<Vec<f64>>,
    /// `x` poles as `[re, im]`.
    pub x_poles: Vec<[f64; 2]>,
    /// `y` poles as `[re, im]`.
    pub y_poles: Vec<[f64; 2]>,
    /// `(x-pole, y-pole)` index pairs.
    pub pairs: Vec<(usize, usize)>,
    /// Pairing was ambiguous.
    pub ambiguous_pairing: bool,
}

impl From<&EstimationResult> for EstimationRecord {
    fn from(r: &EstimationResult) -> Self {
        let c = |v: &Complex64| [v.re, v.im];
        let m = &r.pairing_matrix;
        Self {
            locations: r.locations.iter().map(|l| [l.x, l.y]).collect(),
            amplitudes: r.amplitudes.iter().map(c).collect(),
            residual: r.residual,
            pairing_matrix: (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect(),
            x_poles: r.diagnostics.x_poles.iter().map(c).collect(),
            y_poles: r.diagnostics.y_poles.iter().map(c).collect(),
            pairs: r.diagnostics.pairs.clone(),
            ambiguous_pairing: r.diagnostics.ambiguous_pairing,
        }
    }
}

/// Writes the per-trial CSV of matched true and estimated pulses.
pub fn write_trials_csv(path: &Path, report: &ExperimentReport) -> Result<()> {
    let header = [
        "trial", "pulse", "x_true", "y_true", "x_est", "y_est", "gamma_true_re", "gamma_true_im", "gamma_est_re",
        "gamma_est_im",
    ];
    let rows = report.trials.iter().flat_map(|t| {
        t.truth.iter().zip(&t.estimate).enumerate().map(move |(l, (a, b))| {
            let mut row = vec![t.trial.to_string(), l.to_string()];
            row.extend([a.x, a.y, b.x, b.y, a.gamma[0], a.gamma[1], b.gamma[0], b.gamma[1]].map(fmt));
            row
        })
    });
    write_rows(path, &header, rows)
}

/// Wall-clock record kept apart from the report so reports stay reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Runtime in seconds.
    pub runtime_seconds: f64,
    /// Trials run.
    pub trials: usize,
}

/// Writes `report.json`, `trials.csv` and `timing.json` into `dir`.
pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write_json(&dir.join("report.json"), report)?;
    write_trials_csv(&dir.join("trials.csv"), report)?;
    write_json(&dir.join("timing.json"), &Timing { runtime_seconds: report.runtime_seconds, trials: report.trials.len() })
}

/// Creates the parent directory of `path`.
pub fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => std::fs::create_dir_all(p).map_err(|e| CliError::io(p, e)),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(fmt(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sidecar_shares_stem() {
        assert_eq!(sidecar_path(Path::new("out/s.csv")), PathBuf::from("out/s.json"));
    }
}
