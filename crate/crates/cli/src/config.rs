//! Experiment configuration: defaults, JSON config files, flag overrides
//! and validation. The file schema mirrors the flag names exactly
//! (kebab-case keys, `seed` and `out` matching `--seed` / `--out`).

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Post-selected pointer pdf and displacement summary.
    Pointer,
    /// Photon + ensemble homodyne distribution.
    Ensemble,
    /// Estimator comparison over a phi grid.
    Sweep,
    /// Single-point kappa estimate.
    Estimate,
}

impl Command {
    pub fn default_output(&self) -> &'static str {
        match self {
            Command::Pointer => "pointer.csv",
            Command::Ensemble => "ensemble.csv",
            Command::Sweep => "sweep.csv",
            Command::Estimate => "estimate.json",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Pointer => "pointer",
            Command::Ensemble => "ensemble",
            Command::Sweep => "sweep",
            Command::Estimate => "estimate",
        };
        f.write_str(s)
    }
}

/// Fully resolved run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub kappa: f64,
    pub phi: f64,
    pub width: f64,
    pub beta: f64,
    pub n_atoms: usize,
    pub n_photons: usize,
    pub n_trials: u64,
    pub fock_dim: usize,
    pub phi_grid: Vec<f64>,
    pub seed: u64,
    pub out: String,
}

/// Partial configuration, as read from a JSON file. Unknown keys are
/// rejected so typos fail loudly.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub kappa: Option<f64>,
    pub phi: Option<f64>,
    pub width: Option<f64>,
    pub beta: Option<f64>,
    pub n_atoms: Option<usize>,
    pub n_photons: Option<usize>,
    pub n_trials: Option<u64>,
    pub fock_dim: Option<usize>,
    pub phi_grid: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

#[derive(Debug)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ValidationError {}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, ValidationError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ValidationError(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| ValidationError(format!("malformed config {}: {e}", path.display())))
    }

    /// Layer `self` over `lower` (fields present in `self` win).
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: self.command.or(lower.command),
            kappa: self.kappa.or(lower.kappa),
            phi: self.phi.or(lower.phi),
            width: self.width.or(lower.width),
            beta: self.beta.or(lower.beta),
            n_atoms: self.n_atoms.or(lower.n_atoms),
            n_photons: self.n_photons.or(lower.n_photons),
            n_trials: self.n_trials.or(lower.n_trials),
            fock_dim: self.fock_dim.or(lower.fock_dim),
            phi_grid: self.phi_grid.or(lower.phi_grid),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
        }
    }

    /// Fill defaults and validate every range.
    pub fn resolve(self) -> Result<ExperimentConfig, ValidationError> {
        let command = self
            .command
            .ok_or_else(|| ValidationError("missing required field: command".into()))?;
        let config = ExperimentConfig {
            command,
            kappa: self.kappa.unwrap_or(0.01),
            phi: self.phi.unwrap_or(0.1),
            width: self.width.unwrap_or(1.0),
            beta: self.beta.unwrap_or(0.0),
            n_atoms: self.n_atoms.unwrap_or(16),
            n_photons: self.n_photons.unwrap_or(1),
            n_trials: self.n_trials.unwrap_or(100_000),
            fock_dim: self.fock_dim.unwrap_or(32),
            phi_grid: self.phi_grid.unwrap_or_default(),
            seed: self.seed.unwrap_or(42),
            out: self
                .out
                .unwrap_or_else(|| command.default_output().to_string()),
        };
        config.validate()?;
        Ok(config)
    }
}

fn check_unit_interval(name: &str, value: f64) -> Result<(), ValidationError> {
    if value.is_nan() || value < 0.0 {
        return Err(ValidationError(format!("{name} must be >= 0, got {value}")));
    }
    if value >= 1.0 {
        return Err(ValidationError(format!("{name} must be < 1, got {value}")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        check_unit_interval("kappa", self.kappa)?;
        check_unit_interval("phi", self.phi)?;
        check_unit_interval("beta", self.beta)?;
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(ValidationError(format!(
                "width must be > 0, got {}",
                self.width
            )));
        }
        if self.fock_dim < 2 {
            return Err(ValidationError(format!(
                "fock-dim must be >= 2, got {}",
                self.fock_dim
            )));
        }
        if self.n_atoms == 0 || self.n_atoms > weakval::ensemble::MAX_ATOMS {
            return Err(ValidationError(format!(
                "n-atoms must be in 1..={}, got {}",
                weakval::ensemble::MAX_ATOMS,
                self.n_atoms
            )));
        }
        if self.n_photons == 0 {
            return Err(ValidationError(format!(
                "n-photons must be >= 1, got {}",
                self.n_photons
            )));
        }
        if self.n_trials == 0 {
            return Err(ValidationError(format!(
                "n-trials must be >= 1, got {}",
                self.n_trials
            )));
        }
        for (i, &phi) in self.phi_grid.iter().enumerate() {
            check_unit_interval(&format!("phi-grid[{i}]"), phi)?;
        }
        if self.command == Command::Sweep && self.phi_grid.is_empty() {
            return Err(ValidationError(
                "phi-grid must be non-empty for the sweep command".into(),
            ));
        }
        if self.out.is_empty() {
            return Err(ValidationError("out must be a non-empty path".into()));
        }
        Ok(())
    }
}
