//! Command-line front end: configuration from flags and/or a JSON config
//! file (flags win), dispatch to the simulator, plot-ready CSV/JSON output.

mod commands;
mod config;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, ExperimentConfig, PartialConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "weakval",
    about = "Simulator and estimation harness for post-selected weak measurements",
    long_about = None
)]
struct Cli {
    /// What to run: pointer, ensemble, sweep or estimate.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Dimensionless coupling strength (0 <= kappa < 1).
    #[arg(long)]
    kappa: Option<f64>,
    /// Post-selection admixture (0 <= phi < 1); phi = 0 is the dark port.
    #[arg(long)]
    phi: Option<f64>,
    /// Pointer Gaussian width w.
    #[arg(long)]
    width: Option<f64>,
    /// Per-trial background detection probability (0 <= beta < 1).
    #[arg(long)]
    beta: Option<f64>,
    /// Atoms in the ensemble.
    #[arg(long = "n-atoms")]
    n_atoms: Option<usize>,
    /// Photons in the write beam.
    #[arg(long = "n-photons")]
    n_photons: Option<usize>,
    /// Monte Carlo trial budget.
    #[arg(long = "n-trials")]
    n_trials: Option<u64>,
    /// Fock truncation for the pointer.
    #[arg(long = "fock-dim")]
    fock_dim: Option<usize>,
    /// Comma-separated phi values for the sweep command.
    #[arg(long = "phi-grid", value_delimiter = ',')]
    phi_grid: Option<Vec<f64>>,
    /// Master seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (defaults to <command>.csv or estimate.json).
    #[arg(long)]
    out: Option<String>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn into_partial(self) -> (PartialConfig, Option<PathBuf>) {
        let file = self.config;
        let partial = PartialConfig {
            command: self.command,
            kappa: self.kappa,
            phi: self.phi,
            width: self.width,
            beta: self.beta,
            n_atoms: self.n_atoms,
            n_photons: self.n_photons,
            n_trials: self.n_trials,
            fock_dim: self.fock_dim,
            phi_grid: self.phi_grid,
            seed: self.seed,
            out: self.out,
        };
        (partial, file)
    }
}

fn resolve(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let (flags, config_path) = cli.into_partial();
    let file = match config_path {
        Some(path) => PartialConfig::from_file(&path)?,
        None => PartialConfig::default(),
    };
    Ok(flags.over(file).resolve()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match resolve(cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{}", e.to_stderr_json());
            return ExitCode::from(e.exit_code());
        }
    };
    match commands::run(&config) {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_stderr_json());
            ExitCode::from(e.exit_code())
        }
    }
}
