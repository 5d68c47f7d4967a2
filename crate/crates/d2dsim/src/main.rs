//! `d2dsim`: parameter sweeps and theory-vs-simulation validation for the
//! energy-harvesting D2D relay-selection model.

use clap::{Parser, Subcommand};
use d2dsim::cli::{run_sweep, validation_report, SweepSpec, VariantSelect};
use d2dsim::montecarlo::SweepAxis;
use d2dsim::SystemConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "d2dsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one axis and write a CSV with Monte Carlo and closed-form
    /// outage columns.
    Run {
        /// JSON config file; defaults to the built-in baseline parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Axis to sweep: alpha, rho or n_pairs.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Monte Carlo trials per point.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Master seed; per-point seeds derive from it.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Analytic cellular columns to fill: literal, corrected or both.
        #[arg(long, default_value = "both")]
        variant: VariantSelect,
        /// Worker threads (never changes the numbers, only the wall time).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Estimate outage at a single config and check it against the
    /// closed forms.
    Validate {
        /// JSON config file; defaults to the built-in baseline parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<SystemConfig, d2dsim::ConfigError> {
    match path {
        Some(p) => SystemConfig::from_json_file(p),
        None => Ok(SystemConfig::baseline()),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            axis,
            values,
            trials,
            seed,
            out,
            variant,
            workers,
        } => {
            let cfg = match load_config(config.as_ref()) {
                Ok(cfg) => cfg,
                Err(err) => {
                    eprintln!("config error: {err}");
                    return ExitCode::from(2);
                }
            };
            if trials < 1 {
                eprintln!("config error: trials: must be at least 1");
                return ExitCode::from(2);
            }
            let spec = SweepSpec {
                axis,
                values,
                trials,
                seed,
                workers: workers.unwrap_or_else(default_workers),
                variant,
            };
            let (curve, csv) = run_sweep(&cfg, &spec);
            if let Err(err) = std::fs::write(&out, csv.as_bytes()) {
                eprintln!("failed to write {}: {err}", out.display());
                // do not leave a truncated file behind
                let _ = std::fs::remove_file(&out);
                return ExitCode::from(2);
            }
            for point in &curve.points {
                if let Err(err) = &point.data {
                    eprintln!("point {} failed: {err}", point.value);
                }
            }
            if curve.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Validate {
            config,
            trials,
            seed,
            workers,
        } => {
            let cfg = match load_config(config.as_ref()) {
                Ok(cfg) => cfg,
                Err(err) => {
                    eprintln!("config error: {err}");
                    return ExitCode::from(2);
                }
            };
            if trials < 1 {
                eprintln!("config error: trials: must be at least 1");
                return ExitCode::from(2);
            }
            let (report, ok) = validation_report(
                &cfg,
                trials,
                seed,
                workers.unwrap_or_else(default_workers),
            );
            print!("{report}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
