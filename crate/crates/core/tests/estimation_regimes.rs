//! Paired Monte Carlo comparisons of the estimation strategies on a fixed
//! budget and seed. The orderings below are statistical properties of the
//! regime, demonstrated at the pinned seed; the per-seed scatter is real
//! (the dark-port estimator clamps at zero when the observed rate falls
//! below the background level, which is exactly why it degrades there).

use weakval::estimation::{estimate_dark_port, estimate_weak_value, run_trials, sweep_phi};
use weakval::weak_protocol::ProtocolParams;

const SEED: u64 = 42;

#[test]
fn weak_value_beats_dark_port_when_background_dominates() {
    // kappa^2 = 9e-6 << beta = 1e-4: dark-port detections are mostly noise
    let (kappa, beta, n) = (0.003f64, 1e-4, 100_000u64);

    let wv_records =
        run_trials(&ProtocolParams::new(kappa, 0.03, 1.0, beta).unwrap(), n, SEED).unwrap();
    let wv = estimate_weak_value(&wv_records, 0.03, 1.0).unwrap();

    let dp_records =
        run_trials(&ProtocolParams::new(kappa, 0.0, 1.0, beta).unwrap(), n, SEED).unwrap();
    let dp = estimate_dark_port(&dp_records, n, beta).unwrap();

    assert!(
        wv.rmse.unwrap() < dp.rmse.unwrap(),
        "weak-value rmse {} should beat dark-port rmse {}",
        wv.rmse.unwrap(),
        dp.rmse.unwrap()
    );
    // the weak-value estimate actually sees the signal
    assert!((wv.kappa_hat.unwrap() - kappa).abs() < 4.0 * wv.rmse.unwrap());
}

#[test]
fn sweep_rmse_is_minimized_at_interior_phi() {
    let grid = [0.0, 0.03, 0.1, 0.3];
    let all = sweep_phi(0.003f64, 1e-4, &grid, 100_000, SEED, 1.0).unwrap();
    let rmses: Vec<f64> = all.iter().map(|s| s.rmse.unwrap()).collect();
    let min_idx = rmses
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert!(
        min_idx != 0 && min_idx != grid.len() - 1,
        "rmse minimized at endpoint phi={}: {rmses:?}",
        grid[min_idx]
    );
}

#[test]
fn dark_port_is_competitive_without_background() {
    // beta = 0 removes the noise penalty: the dark-port RMSE lands within
    // a factor 1.5 of the best weak-value point instead of a factor ~2+
    let grid = [0.0, 0.1, 0.3];
    let all = sweep_phi(0.02f64, 0.0, &grid, 100_000, SEED, 1.0).unwrap();
    let dp_rmse = all[0].rmse.unwrap();
    let best_wv = all[1..]
        .iter()
        .map(|s| s.rmse.unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(
        dp_rmse < 1.5 * best_wv,
        "dark-port rmse {dp_rmse} not competitive with weak-value {best_wv}"
    );
    // and its point estimate is accurate
    assert!((all[0].kappa_hat.unwrap() - 0.02).abs() < 4.0 * dp_rmse);
}
