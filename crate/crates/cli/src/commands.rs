//! Implementations of the four run commands. Each writes its output file
//! and returns the paths written; all output is deterministic in the
//! configuration (including the seed).

use std::path::PathBuf;

use serde::Serialize;

use weakval::ensemble::{
    atomic_homodyne_distribution, detect_photon, raman_scatter_first_order, tv_to_continuum,
};
use weakval::estimation::{
    estimate_dark_port, estimate_weak_value, run_trials, sweep_phi, SummaryStats,
};
use weakval::grid::PositionGrid;
use weakval::pointer_fock::mean_position;
use weakval::weak_protocol::{
    classify_regime, conditional_pdf, evolve_exact, evolve_first_order, post_select, weak_value,
    ProtocolParams,
};

use crate::config::{Command, ExperimentConfig};
use crate::error::CliError;
use crate::format::{fmt_g, Csv};

pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    match config.command {
        Command::Pointer => pointer(config),
        Command::Ensemble => ensemble(config),
        Command::Sweep => sweep(config),
        Command::Estimate => estimate(config),
    }
}

fn config_comment(config: &ExperimentConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    format!("config: {json}")
}

fn write_text(path: &str, text: String) -> Result<Vec<PathBuf>, CliError> {
    std::fs::write(path, text).map_err(CliError::Io)?;
    Ok(vec![PathBuf::from(path)])
}

/// Conditional pointer pdf on the standard grid plus a displacement and
/// probability summary. The tabulated pdf is the first-order (single
/// scattering) pointer; the exact-evolution mean is reported alongside.
fn pointer(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let params = ProtocolParams::new(config.kappa, config.phi, config.width, config.beta)?;

    let first = post_select(
        &evolve_first_order(&params, config.fock_dim)?,
        config.phi,
    )?;
    let exact = post_select(&evolve_exact(&params, config.fock_dim)?, config.phi)?;
    let mean_x = mean_position(&first.pointer)?;
    let mean_x_exact = mean_position(&exact.pointer)?;

    let grid = PositionGrid::standard(config.width, mean_x.min(0.0), mean_x.max(0.0));

    let mut csv = Csv::new();
    csv.comment(&config_comment(config));
    csv.comment(&format!("regime = {}", classify_regime(&params).label()));
    csv.comment(&format!("mean_x = {}", fmt_g(mean_x)));
    csv.comment(&format!("mean_x_exact = {}", fmt_g(mean_x_exact)));
    csv.comment(&format!("prob_leading = {}", fmt_g(first.prob_leading)));
    csv.comment(&format!("prob_exact = {}", fmt_g(exact.prob)));
    if config.phi > 0.0 {
        csv.comment(&format!("weak_value = {}", fmt_g(weak_value(config.phi)?)));
        csv.comment(&format!(
            "displacement_first_order = {}",
            fmt_g(2.0_f64.sqrt() * config.width * config.kappa / config.phi)
        ));
    }
    csv.header(&["x", "pdf"]);
    for x in grid.nodes() {
        let pdf = conditional_pdf(&first.pointer, x);
        csv.row(&[fmt_g(x), fmt_g(pdf)]);
    }
    write_text(&config.out, csv.finish())
}

/// Discrete atomic homodyne distribution for the photon + ensemble
/// implementation, with its total-variation distance to the continuum pdf.
fn ensemble(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let state = raman_scatter_first_order(config.n_photons, config.n_atoms, config.kappa)?;
    let (atomic, weight) = detect_photon(&state, config.phi)?;
    let dist = atomic_homodyne_distribution(&atomic)?;
    let tv = tv_to_continuum(&dist, config.phi, config.kappa)?;

    let mut csv = Csv::new();
    csv.comment(&config_comment(config));
    csv.comment(&format!("detection_weight = {}", fmt_g(weight)));
    csv.comment(&format!("mean_x = {}", fmt_g(dist.mean())));
    csv.comment(&format!("tv_distance = {}", fmt_g(tv)));
    csv.header(&["x", "probability"]);
    for &(x, p) in dist.points() {
        csv.row(&[fmt_g(x), fmt_g(p)]);
    }
    write_text(&config.out, csv.finish())
}

fn stats_row(stats: &SummaryStats<f64>) -> Vec<String> {
    vec![
        fmt_g(stats.phi),
        stats.strategy.label().to_string(),
        stats.kappa_hat.map(fmt_g).unwrap_or_default(),
        stats.rmse.map(fmt_g).unwrap_or_default(),
        stats.n_detections.to_string(),
        stats.n_trials.to_string(),
        fmt_g(stats.detection_rate),
        stats.flags.join(";"),
    ]
}

/// One estimator summary per phi on a shared trial budget and seed.
fn sweep(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let all = sweep_phi(
        config.kappa,
        config.beta,
        &config.phi_grid,
        config.n_trials,
        config.seed,
        config.width,
    )?;
    let mut csv = Csv::new();
    csv.comment(&config_comment(config));
    csv.header(&[
        "phi",
        "strategy",
        "kappa_hat",
        "rmse",
        "n_detections",
        "n_trials",
        "detection_rate",
        "flags",
    ]);
    for stats in &all {
        csv.row(&stats_row(stats));
    }
    write_text(&config.out, csv.finish())
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    config: &'a ExperimentConfig,
    stats: SummaryStats<f64>,
}

/// Single-point estimate of kappa, written as JSON.
fn estimate(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let params = ProtocolParams::new(config.kappa, config.phi, config.width, config.beta)?;
    let records = run_trials(&params, config.n_trials, config.seed)?;
    let mut stats = if config.phi == 0.0 {
        estimate_dark_port(&records, config.n_trials, config.beta)?
    } else {
        estimate_weak_value(&records, config.phi, config.width)?
    };
    stats.beta = Some(config.beta);
    stats.master_seed = Some(config.seed);
    stats.width = Some(config.width);

    let report = EstimateReport { config, stats };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_text(&config.out, json)
}
