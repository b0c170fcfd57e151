//! Deterministic Monte Carlo harness for estimating the coupling kappa.
//!
//! Trial model: with probability `p_true = phi^2 + kappa^2` (the protocol's
//! leading-order post-selection probability) a true detection occurs and
//! the homodyne sample is drawn from the conditional pointer pdf;
//! independently, with probability `beta`, a background detection occurs
//! with a sample from the undisplaced `|psi_0|^2`. When both fire in one
//! trial the background event is kept with probability
//! `beta/(p_true + beta)`, matching a superposition of Poisson-thinned
//! processes.
//!
//! Reproducibility contract: trial `i` consumes randomness only from an
//! RNG seeded by `splitmix64(master_seed, i)` (the SplitMix64 stream with
//! the master seed as initial state), so records are bit-identical for a
//! given `(config, master_seed)` regardless of generation order, and trial
//! generation may be parallelized without changing output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSampler, PositionGrid};
use crate::pointer_fock::{ground_state, mean_position, PointerState, DEFAULT_FOCK_DIM};
use crate::real::Real;
use crate::weak_protocol::{conditional_pdf, evolve_first_order, post_select, ProtocolParams};

/// Bootstrap resample count for the reported RMSE.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Fixed seed for bootstrap resampling; estimator output stays a pure
/// function of the record stream.
pub const BOOTSTRAP_SEED: u64 = 0x0b00_75ea_0b00_75ea;

/// Background-noise model: per-trial click probability and the undisplaced
/// ground-state pdf the background samples are drawn from.
#[derive(Clone, Debug)]
pub struct NoiseModel<T> {
    beta: T,
    background: PointerState<T>,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(beta: T, width: T) -> Result<Self> {
        if !(beta >= T::zero() && beta < T::one()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                bound: "in [0, 1)",
                value: beta.to_f64(),
            });
        }
        Ok(NoiseModel {
            beta,
            background: ground_state(DEFAULT_FOCK_DIM, width)?,
        })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Background density `|psi_0(x)|^2`.
    pub fn background_pdf(&self, x: T) -> T {
        conditional_pdf(&self.background, x)
    }
}

/// One simulated trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord<T> {
    pub trial_index: u64,
    pub detected: bool,
    /// Ground truth for diagnostics only; estimators must not read it.
    pub is_background: bool,
    /// Present iff `detected`.
    pub homodyne_sample: Option<T>,
}

/// Estimation strategy label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    WeakValue,
    DarkPort,
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::WeakValue => "weak_value",
            Strategy::DarkPort => "dark_port",
        }
    }
}

/// Aggregated estimator output for one record stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats<T> {
    pub strategy: Strategy,
    /// Point estimate; absent when the stream carried no usable data.
    pub kappa_hat: Option<T>,
    /// Bootstrap RMSE of the point estimate; absent with `kappa_hat`.
    pub rmse: Option<T>,
    pub n_detections: u64,
    pub n_trials: u64,
    pub detection_rate: T,
    // config echo
    pub phi: T,
    pub width: Option<T>,
    pub beta: Option<T>,
    pub master_seed: Option<u64>,
    /// "insufficient-data", "single-sample", "low-snr" as applicable.
    pub flags: Vec<String>,
}

/// SplitMix64 output for stream position `index` starting from `seed`.
///
/// This is the documented per-trial mixing function: golden-gamma
/// increment followed by the murmur-style finalizer.
pub fn splitmix64(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(master_seed, trial_index))
}

/// Generate `n_trials` records under `params` (beta taken from the params).
///
/// Deterministic in `(params, n_trials, master_seed)`.
pub fn run_trials<T: Real>(
    params: &ProtocolParams<T>,
    n_trials: u64,
    master_seed: u64,
) -> Result<Vec<TrialRecord<T>>> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter {
            name: "n_trials",
            bound: ">= 1",
            value: 0.0,
        });
    }
    let beta = params.beta();
    let p_true = params.phi() * params.phi() + params.kappa() * params.kappa();

    // conditional sampler for true detections (absent if p_true = 0)
    let conditional = if p_true > T::zero() {
        let state = evolve_first_order(params, DEFAULT_FOCK_DIM)?;
        let selected = post_select(&state, params.phi())?;
        let mean = mean_position(&selected.pointer)?;
        let grid =
            PositionGrid::standard(params.width(), mean.min(T::zero()), mean.max(T::zero()));
        let pointer = selected.pointer;
        Some(GridSampler::from_fn(grid, move |x| {
            conditional_pdf(&pointer, x)
        }))
    } else {
        None
    };
    let background = if beta > T::zero() {
        let noise = NoiseModel::new(beta, params.width())?;
        let grid = PositionGrid::standard(params.width(), T::zero(), T::zero());
        Some(GridSampler::from_fn(grid, move |x| noise.background_pdf(x)))
    } else {
        None
    };

    let mut records = Vec::with_capacity(n_trials as usize);
    for trial_index in 0..n_trials {
        let mut rng = trial_rng(master_seed, trial_index);
        let true_event = T::from_f64(rng.random::<f64>()) < p_true;
        let bg_event = beta > T::zero() && T::from_f64(rng.random::<f64>()) < beta;
        let is_background = match (true_event, bg_event) {
            (true, true) => T::from_f64(rng.random::<f64>()) < beta / (p_true + beta),
            (false, true) => true,
            _ => false,
        };
        let detected = true_event || bg_event;
        let homodyne_sample = if detected {
            let u = T::from_f64(rng.random::<f64>());
            let sampler = if is_background {
                background
                    .as_ref()
                    .expect("background event requires beta > 0")
            } else {
                conditional.as_ref().expect("true event requires p_true > 0")
            };
            Some(sampler.sample(u))
        } else {
            None
        };
        records.push(TrialRecord {
            trial_index,
            detected,
            is_background,
            homodyne_sample,
        });
    }
    Ok(records)
}

fn bootstrap_rmse_of_mean<T: Real>(samples: &[T], scale: T, center: T) -> T {
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let m = samples.len();
    let inv_m = T::one() / T::from_usize(m);
    let mut acc = T::zero();
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let mut sum = T::zero();
        for _ in 0..m {
            sum += samples[rng.random_range(0..m)];
        }
        let est = sum * inv_m * scale;
        let dev = est - center;
        acc += dev * dev;
    }
    (acc / T::from_usize(BOOTSTRAP_RESAMPLES)).sqrt()
}

fn push_common_flags<T: Real>(flags: &mut Vec<String>, kappa_hat: T, rmse: T, n_detections: u64) {
    if n_detections == 1 {
        flags.push("single-sample".into());
    }
    if kappa_hat.abs() <= T::from_f64(2.0) * rmse {
        flags.push("low-snr".into());
    }
}

/// Weak-value estimator: invert the amplified displacement,
/// `kappa_hat = mean(x) * phi / (sqrt(2) w)`.
///
/// Bias is O((kappa/phi)^2) relative by construction of the first-order
/// displacement law. RMSE is the bootstrap spread over resampled detection
/// sets. Fails with insufficient-data if nothing was detected.
pub fn estimate_weak_value<T: Real>(
    records: &[TrialRecord<T>],
    phi: T,
    width: T,
) -> Result<SummaryStats<T>> {
    let samples: Vec<T> = records.iter().filter_map(|r| r.homodyne_sample).collect();
    if samples.is_empty() {
        return Err(Error::InsufficientData);
    }
    let n_detections = samples.len() as u64;
    let n_trials = records.len() as u64;
    let scale = phi / (T::from_f64(2.0).sqrt() * width);
    let mean: T = samples.iter().copied().sum::<T>() / T::from_usize(samples.len());
    let kappa_hat = mean * scale;
    let rmse = bootstrap_rmse_of_mean(&samples, scale, kappa_hat);

    let mut flags = Vec::new();
    push_common_flags(&mut flags, kappa_hat, rmse, n_detections);
    Ok(SummaryStats {
        strategy: Strategy::WeakValue,
        kappa_hat: Some(kappa_hat),
        rmse: Some(rmse),
        n_detections,
        n_trials,
        detection_rate: T::from_f64(n_detections as f64 / n_trials as f64),
        phi,
        width: Some(width),
        beta: None,
        master_seed: None,
        flags,
    })
}

/// Dark-port estimator: `kappa_hat = sqrt(max(0, detection_rate - beta))`.
///
/// The bootstrap resamples the per-trial detection indicators, which for
/// Booleans is exactly a binomial draw around the observed rate.
pub fn estimate_dark_port<T: Real>(
    records: &[TrialRecord<T>],
    n_trials: u64,
    beta_known: T,
) -> Result<SummaryStats<T>> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter {
            name: "n_trials",
            bound: ">= 1",
            value: 0.0,
        });
    }
    let n_detections = records.iter().filter(|r| r.detected).count() as u64;
    let rate = T::from_f64(n_detections as f64 / n_trials as f64);
    let kappa_hat = (rate - beta_known).max(T::zero()).sqrt();

    let binom = Binomial::new(n_trials, rate.to_f64().clamp(0.0, 1.0))
        .expect("rate is a valid probability");
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let inv_n = T::one() / T::from_f64(n_trials as f64);
    let mut acc = T::zero();
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let k = binom.sample(&mut rng);
        let r = T::from_f64(k as f64) * inv_n;
        let est = (r - beta_known).max(T::zero()).sqrt();
        let dev = est - kappa_hat;
        acc += dev * dev;
    }
    let rmse = (acc / T::from_usize(BOOTSTRAP_RESAMPLES)).sqrt();

    let mut flags = Vec::new();
    if n_detections == 0 {
        flags.push("insufficient-data".into());
    }
    push_common_flags(&mut flags, kappa_hat, rmse, n_detections);
    Ok(SummaryStats {
        strategy: Strategy::DarkPort,
        kappa_hat: Some(kappa_hat),
        rmse: Some(rmse),
        n_detections,
        n_trials,
        detection_rate: rate,
        phi: T::zero(),
        width: None,
        beta: Some(beta_known),
        master_seed: None,
        flags,
    })
}

/// Run the full strategy comparison over a grid of post-selection angles.
///
/// Every phi reuses the same master seed, so the per-trial random draws
/// are shared across strategies (a paired comparison on one budget).
/// phi = 0 routes to the dark-port estimator; a weak-value stream with no
/// detections yields a flagged placeholder instead of an error.
pub fn sweep_phi<T: Real>(
    kappa: T,
    beta: T,
    phi_grid: &[T],
    n_trials: u64,
    master_seed: u64,
    width: T,
) -> Result<Vec<SummaryStats<T>>> {
    let mut out = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let params = ProtocolParams::new(kappa, phi, width, beta)?;
        let records = run_trials(&params, n_trials, master_seed)?;
        let mut stats = if phi == T::zero() {
            estimate_dark_port(&records, n_trials, beta)?
        } else {
            match estimate_weak_value(&records, phi, width) {
                Ok(stats) => stats,
                Err(Error::InsufficientData) => SummaryStats {
                    strategy: Strategy::WeakValue,
                    kappa_hat: None,
                    rmse: None,
                    n_detections: 0,
                    n_trials,
                    detection_rate: T::zero(),
                    phi,
                    width: Some(width),
                    beta: Some(beta),
                    master_seed: Some(master_seed),
                    flags: vec!["insufficient-data".into()],
                },
                Err(e) => return Err(e),
            }
        };
        stats.phi = phi;
        stats.width = Some(width);
        stats.beta = Some(beta);
        stats.master_seed = Some(master_seed);
        out.push(stats);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(kappa: f64, phi: f64, beta: f64) -> ProtocolParams<f64> {
        ProtocolParams::new(kappa, phi, 1.0, beta).unwrap()
    }

    #[test]
    fn splitmix_distinguishes_trials_and_seeds() {
        assert_ne!(splitmix64(42, 0), splitmix64(42, 1));
        assert_ne!(splitmix64(42, 0), splitmix64(43, 0));
        // coarse uniformity: top bit set about half the time
        let ones = (0..1000).filter(|&i| splitmix64(7, i) >> 63 == 1).count();
        assert!((400..600).contains(&ones));
    }

    #[test]
    fn same_seed_reproduces_records_bitwise() {
        let p = params(0.02, 0.1, 1e-3);
        let a = run_trials(&p, 2000, 7).unwrap();
        let b = run_trials(&p, 2000, 7).unwrap();
        assert_eq!(a, b);
        let c = run_trials(&p, 2000, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_present_iff_detected() {
        let p = params(0.05, 0.2, 1e-2);
        for r in run_trials(&p, 5000, 3).unwrap() {
            assert_eq!(r.detected, r.homodyne_sample.is_some());
            if r.is_background {
                assert!(r.detected);
            }
        }
    }

    #[test]
    fn detection_fraction_tracks_leading_order_probability() {
        let (kappa, phi) = (0.01, 0.1);
        let n = 1_000_000u64;
        let records = run_trials(&params(kappa, phi, 0.0), n, 42).unwrap();
        let frac = records.iter().filter(|r| r.detected).count() as f64 / n as f64;
        let p = phi * phi + kappa * kappa;
        let stderr = (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (frac - p).abs() < 3.0 * stderr,
            "fraction {frac} vs {p} (stderr {stderr})"
        );
    }

    #[test]
    fn zero_coupling_gives_phi_squared_rate_and_centered_samples() {
        let phi = 0.1;
        let n = 200_000u64;
        let records = run_trials(&params(0.0, phi, 0.0), n, 11).unwrap();
        let frac = records.iter().filter(|r| r.detected).count() as f64 / n as f64;
        let stderr = (phi * phi * (1.0 - phi * phi) / n as f64).sqrt();
        assert!((frac - phi * phi).abs() < 3.0 * stderr);
        let samples: Vec<f64> = records.iter().filter_map(|r| r.homodyne_sample).collect();
        let mean: f64 = samples.iter().sum::<f64>() / samples.len() as f64;
        let tol = 4.0 / (samples.len() as f64).sqrt() * (1.0 / 2.0_f64.sqrt());
        assert!(mean.abs() < tol, "mean {mean} tol {tol}");
    }

    #[test]
    fn detection_rate_law_with_background() {
        let (kappa, phi, beta) = (0.05, 0.1, 0.02);
        let n = 400_000u64;
        let records = run_trials(&params(kappa, phi, beta), n, 5).unwrap();
        let frac = records.iter().filter(|r| r.detected).count() as f64 / n as f64;
        let p = phi * phi + kappa * kappa;
        let expected = p + beta - p * beta;
        let stderr = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (frac - expected).abs() < 4.0 * stderr,
            "fraction {frac} vs {expected}"
        );
    }

    #[test]
    fn background_samples_have_zero_mean() {
        let beta = 0.05;
        let n = 200_000u64;
        let records = run_trials(&params(0.01, 0.1, beta), n, 9).unwrap();
        let bg: Vec<f64> = records
            .iter()
            .filter(|r| r.is_background)
            .filter_map(|r| r.homodyne_sample)
            .collect();
        assert!(!bg.is_empty());
        let mean: f64 = bg.iter().sum::<f64>() / bg.len() as f64;
        let tol = 4.0 / (bg.len() as f64).sqrt() / 2.0_f64.sqrt();
        assert!(mean.abs() < tol, "background mean {mean} tol {tol}");
    }

    #[test]
    fn weak_value_estimator_recovers_kappa() {
        let (kappa, phi) = (0.01, 0.1);
        let n = 1_000_000u64;
        let records = run_trials(&params(kappa, phi, 0.0), n, 42).unwrap();
        let stats = estimate_weak_value(&records, phi, 1.0).unwrap();
        let kappa_hat = stats.kappa_hat.unwrap();
        let rmse = stats.rmse.unwrap();
        assert!(
            (kappa_hat - kappa).abs() < 4.0 * rmse,
            "kappa_hat {kappa_hat} vs {kappa} (rmse {rmse})"
        );
        assert!(!stats.flags.contains(&"low-snr".to_string()));
    }

    #[test]
    fn weak_value_estimator_flags_zero_signal() {
        let phi = 0.1;
        let records = run_trials(&params(0.0, phi, 0.0), 100_000, 4).unwrap();
        let stats = estimate_weak_value(&records, phi, 1.0).unwrap();
        let kappa_hat = stats.kappa_hat.unwrap();
        assert!(kappa_hat.abs() < 5.0 * stats.rmse.unwrap());
        assert!(stats.flags.contains(&"low-snr".to_string()));
    }

    #[test]
    fn weak_value_estimator_on_pure_background() {
        // beta >> p_true: nearly all detections are background; the
        // estimate is consistent with zero and flagged
        let records = run_trials(&params(1e-4, 1e-3, 0.05), 200_000, 13).unwrap();
        let stats = estimate_weak_value(&records, 1e-3, 1.0).unwrap();
        assert!(stats.kappa_hat.unwrap().abs() <= 4.0 * stats.rmse.unwrap());
        assert!(stats.flags.contains(&"low-snr".to_string()));
    }

    #[test]
    fn weak_value_estimator_requires_detections() {
        let records = vec![TrialRecord::<f64> {
            trial_index: 0,
            detected: false,
            is_background: false,
            homodyne_sample: None,
        }];
        assert!(matches!(
            estimate_weak_value(&records, 0.1, 1.0),
            Err(Error::InsufficientData)
        ));
    }

    #[test]
    fn dark_port_estimator_recovers_kappa() {
        let kappa = 0.02;
        let n = 1_000_000u64;
        let records = run_trials(&params(kappa, 0.0, 0.0), n, 42).unwrap();
        let stats = estimate_dark_port(&records, n, 0.0).unwrap();
        let kappa_hat = stats.kappa_hat.unwrap();
        let rmse = stats.rmse.unwrap();
        assert!(
            (kappa_hat - kappa).abs() < 4.0 * rmse,
            "kappa_hat {kappa_hat} vs {kappa} (rmse {rmse})"
        );
    }

    #[test]
    fn dark_port_clamps_when_rate_below_background() {
        // no detections at all: rate 0 < beta, clamped to zero
        let records: Vec<TrialRecord<f64>> = (0..100)
            .map(|trial_index| TrialRecord {
                trial_index,
                detected: false,
                is_background: false,
                homodyne_sample: None,
            })
            .collect();
        let stats = estimate_dark_port(&records, 100, 1e-4).unwrap();
        assert_eq!(stats.kappa_hat.unwrap(), 0.0);
        assert!(stats.flags.contains(&"insufficient-data".to_string()));
    }

    #[test]
    fn summary_stats_are_deterministic() {
        let p = params(0.02, 0.1, 1e-3);
        let r1 = run_trials(&p, 50_000, 21).unwrap();
        let r2 = run_trials(&p, 50_000, 21).unwrap();
        let s1 = estimate_weak_value(&r1, 0.1, 1.0).unwrap();
        let s2 = estimate_weak_value(&r2, 0.1, 1.0).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn sweep_routes_dark_port_and_echoes_config() {
        let grid = [0.0, 0.05, 0.2];
        let all = sweep_phi(0.01, 1e-3, &grid, 20_000, 42, 1.0).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all[0].strategy, Strategy::DarkPort);
        assert_eq!(all[1].strategy, Strategy::WeakValue);
        for (stats, phi) in all.iter().zip(grid) {
            assert_eq!(stats.phi, phi);
            assert_eq!(stats.master_seed, Some(42));
            assert_eq!(stats.beta, Some(1e-3));
            assert_eq!(stats.n_trials, 20_000);
        }
    }

    #[test]
    fn degenerate_budget_is_flagged() {
        // one trial: zero or one detection, so every summary is flagged as
        // insufficient data or a single-sample estimate
        let all = sweep_phi(0.01, 0.0, &[0.0, 0.1], 1, 42, 1.0).unwrap();
        for stats in &all {
            assert!(
                stats
                    .flags
                    .iter()
                    .any(|f| f == "insufficient-data" || f == "single-sample"),
                "flags: {:?}",
                stats.flags
            );
        }
    }

    #[test]
    fn noise_model_background_pdf_is_normalized() {
        let noise = NoiseModel::new(0.1, 1.0).unwrap();
        let grid: PositionGrid<f64> = PositionGrid::standard(1.0, 0.0, 0.0);
        let total = grid.integrate(|x| noise.background_pdf(x));
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        assert!(NoiseModel::<f64>::new(1.0, 1.0).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(8))]
        #[test]
        fn record_streams_are_reproducible(seed in 0u64..1000, n in 50u64..200) {
            let p = params(0.05, 0.1, 0.01);
            let a = run_trials(&p, n, seed).unwrap();
            let b = run_trials(&p, n, seed).unwrap();
            proptest::prop_assert_eq!(a, b);
        }
    }
}
