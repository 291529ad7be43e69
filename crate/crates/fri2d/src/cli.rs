//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fri2d_core::estimation::estimate_2d;
use fri2d_core::kernels::KernelSpec;
use fri2d_core::signals::PulseShape;
use fri2d_core::spectral::{demodulate, dtft_on_grid, DEFAULT_SINGULARITY_FLOOR};
use serde_json::json;

use crate::config::{ExperimentConfig, ExperimentKind, KernelConfig, KernelFamily, DEFAULT_OMEGA0};
use crate::error::{CliError, Result};
use crate::experiments::{run_experiment, PulseRecord, Setup};
use crate::export::{emit_kernel, TableDomain};
use crate::io::{self, EstimationRecord, Provenance};

/// Sampling and recovery of 2-D pulse streams through alias-cancelling kernels.
#[derive(Debug, Parser)]
#[command(name = "fri2d", version)]
pub struct Cli {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a kernel in the spatial or frequency domain.
    Kernel {
        /// Kernel selection.
        #[command(flatten)]
        kernel: KernelArgs,
        /// Domain to tabulate.
        #[arg(long, value_enum, default_value = "spatial")]
        domain: TableDomain,
        /// Lattice points per axis.
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Output CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw one trial of an experiment and write its samples.
    Sample {
        /// Experiment selection.
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Trial index to draw.
        #[arg(long, default_value_t = 0)]
        trial: usize,
        /// Output CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn samples into measurements on the spectral grid.
    Spectrum {
        /// Sample CSV written by `sample`.
        #[arg(long)]
        samples: PathBuf,
        /// Smallest admissible `|G·H|` relative to its maximum.
        #[arg(long, default_value_t = DEFAULT_SINGULARITY_FLOOR)]
        floor: f64,
        /// Output CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate pulse locations and amplitudes from measurements.
    Estimate {
        /// Spectrum CSV written by `spectrum`.
        #[arg(long)]
        spectrum: PathBuf,
        /// Number of pulses.
        #[arg(long)]
        pulses: usize,
        /// Output JSON; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the alias-cancellation conditions of a kernel.
    CheckAlias {
        /// Kernel selection.
        #[command(flatten)]
        kernel: KernelArgs,
        /// Sampling rate as a multiple of the critical rate `|K|·Ω0`.
        #[arg(long, default_value_t = 1.0)]
        oversampling: f64,
        /// Largest shift multiple checked.
        #[arg(long, default_value_t = 3)]
        m_max: u32,
    },
    /// Run a Monte-Carlo experiment.
    Experiment {
        /// Which experiment.
        #[arg(value_enum, value_name = "KIND")]
        which: ExperimentKind,
        /// Overrides.
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Directory receiving report.json, trials.csv and timing.json.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

/// Kernel given by a JSON file or by flags.
#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Kernel configuration JSON; the flags below are ignored when given.
    #[arg(long)]
    pub kernel_config: Option<PathBuf>,
    /// Kernel family.
    #[arg(long, value_enum, default_value = "nonseparable")]
    pub family: KernelFamily,
    /// Grid half-size `h` of `⟦−h, h⟧²`.
    #[arg(long, default_value_t = 4)]
    pub half: i32,
    /// Base frequency `Ω0` on both axes.
    #[arg(long, default_value_t = DEFAULT_OMEGA0)]
    pub omega0: f64,
    /// Spline order along `x` (separable).
    #[arg(long, default_value_t = 1)]
    pub r1: u32,
    /// Spline order along `y` (separable).
    #[arg(long, default_value_t = 1)]
    pub r2: u32,
}

impl KernelArgs {
    /// Resolved kernel configuration.
    pub fn resolve(&self) -> Result<KernelConfig> {
        match &self.kernel_config {
            Some(p) => io::read_json(p),
            None => Ok(match self.family {
                KernelFamily::Separable => KernelConfig::separable(self.half, self.omega0, self.r1, self.r2),
                KernelFamily::Nonseparable => KernelConfig::nonseparable(self.half, self.omega0),
            }),
        }
    }
}

/// Experiment configuration file plus flag overrides.
#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Experiment configuration JSON; defaults of the kind are used when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Kind used when no configuration file is given.
    #[arg(long, value_enum)]
    pub kind: Option<ExperimentKind>,
    /// Base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// SNR in dB; `inf` disables noise.
    #[arg(long)]
    pub snr_db: Option<f64>,
}

impl ExperimentArgs {
    /// Configuration with overrides applied.
    pub fn resolve(&self, default_kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default_for(self.kind.unwrap_or(default_kind)),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.snr_db {
            cfg.snr_db = if s == f64::INFINITY { None } else { Some(s) };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn prepare(path: &Path) -> Result<()> {
    io::ensure_parent(path)
}

fn shape_of(p: &Provenance) -> Result<PulseShape> {
    match (p.sigma, p.truncation_halfwidth) {
        (None, _) => Ok(PulseShape::Dirac),
        (Some(s), Some(h)) => Ok(PulseShape::truncated_gaussian(s, h)?),
        (Some(_), None) => Err(CliError::Config("sample provenance has sigma without truncation_halfwidth".into())),
    }
}

/// Runs a parsed command line, printing human-readable output to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Kernel { kernel, domain, points, out } => {
            let k = kernel.resolve()?.build()?;
            prepare(&out)?;
            emit_kernel(&k, domain, points, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Sample { experiment, trial, out } => {
            let cfg = experiment.resolve(ExperimentKind::Dirac)?;
            let setup = Setup::new(&cfg)?;
            let signal = setup.draw_signal(trial)?;
            let samples = setup.acquire(&signal, trial)?;
            let (sigma, hw) = match setup.shape {
                PulseShape::Dirac => (None, None),
                PulseShape::Gaussian { sigma, truncation_halfwidth } => (Some(sigma), Some(truncation_halfwidth)),
            };
            let provenance = Provenance {
                kernel: cfg.kernel.clone(),
                sigma,
                truncation_halfwidth: hw,
                pulses: signal.pulses().iter().map(|p| PulseRecord { gamma: [p.gamma.re, p.gamma.im], x: p.x, y: p.y }).collect(),
                snr_db: cfg.snr_db,
                seed: setup.trial_seed(trial),
            };
            prepare(&out)?;
            io::write_samples(&out, &samples, Some(provenance))?;
            println!("wrote {}", out.display());
        }
        Command::Spectrum { samples, floor, out } => {
            let (set, meta) = io::read_samples(&samples)?;
            let prov = meta
                .provenance
                .ok_or_else(|| CliError::Config("sample sidecar lacks provenance (kernel and pulse shape)".into()))?;
            let kernel: KernelSpec = prov.kernel.build()?;
            let shape = shape_of(&prov)?;
            let grid = *kernel.grid();
            let fhat = dtft_on_grid(&set, &grid)?;
            let p = demodulate(&fhat, &kernel, &shape, &grid, floor)?;
            prepare(&out)?;
            io::write_spectrum(&out, &p)?;
            println!("wrote {}", out.display());
        }
        Command::Estimate { spectrum, pulses, out } => {
            let p = io::read_spectrum(&spectrum)?;
            let record = EstimationRecord::from(&estimate_2d(&p, pulses)?);
            match out {
                Some(path) => {
                    prepare(&path)?;
                    io::write_json(&path, &record)?;
                    println!("wrote {}", path.display());
                }
                None => println!("{}", serde_json::to_string_pretty(&record).expect("serializable")),
            }
        }
        Command::CheckAlias { kernel, oversampling, m_max } => {
            let k = kernel.resolve()?.build()?;
            let (sx, sy) = k.grid().critical_rates();
            let r = k.alias_check(oversampling * sx, oversampling * sy, m_max)?;
            let worst = r.worst_zero_at.map(|p| [p.k1, p.k2, p.m1, p.m2]);
            let value = json!({
                "family": k.family(),
                "pass": r.pass,
                "max_on_grid": r.max_on_grid,
                "min_on_grid_relative": r.min_on_grid,
                "weakest_grid_point": [r.weakest_grid_point.0, r.weakest_grid_point.1],
                "worst_zero_violation_relative": r.worst_zero_violation,
                "worst_zero_at_k1_k2_m1_m2": worst,
                "shifts_checked": r.shifts_checked,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            if !r.pass {
                return Err(CliError::Config("alias-cancellation conditions violated".into()));
            }
        }
        Command::Experiment { which, experiment, out_dir } => {
            let cfg = experiment.resolve(which)?;
            if cfg.kind != which {
                return Err(CliError::Config(format!("configuration describes a {:?} experiment", cfg.kind)));
            }
            let report = run_experiment(&cfg)?;
            io::write_report(&out_dir, &report)?;
            println!("mse_db = {:.2}", report.mse_db);
            println!("mean_amplitude_error = {:.3e}", report.mean_amplitude_error);
            eprintln!("runtime {:.3} s", report.runtime_seconds);
            println!("wrote {}", out_dir.join("report.json").display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
