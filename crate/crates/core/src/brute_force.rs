//! Full 2^N_A product-space oracle for the Dicke-subspace engine.
//!
//! Every scenario is run directly on the tensor product of `N_A` two-level
//! atoms (bit set = atom in |s>), with no symmetric-subspace shortcut:
//! collective operators act atom by atom, the pi/2 pulse is a per-atom
//! gate, and J_x measurement groups basis states by popcount. Results are
//! projected back onto the Dicke basis for comparison with the engine.
//!
//! Quasi-spin convention per atom, in the (|g>, |s>) basis:
//! `sigma_x = diag(1, -1)`, `sigma_y = [[0, 1], [1, 0]]`,
//! `sigma_z = [[0, -i], [i, 0]]`, so that `(sigma_y - i sigma_z)/2 = |s><g|`
//! and `J_- = J_y - i J_z` flips one atom from g to s, symmetrically.

use ndarray::Array1;
use num_complex::Complex;

use crate::ensemble::HomodyneDistribution;
use crate::error::{Error, Result};
use crate::real::Real;

/// Largest atom count the product-space oracle will attempt.
pub const MAX_ORACLE_ATOMS: usize = 10;

/// What to compute on the full product space.
#[derive(Clone, Copy, Debug)]
pub enum Scenario<T> {
    /// The symmetric Dicke state with `excitation` atoms in |s>,
    /// returned as Dicke-basis amplitudes.
    DickeState { excitation: usize },
    /// `J_-` applied to the Dicke state with `excitation` atoms in |s>
    /// (raw, unnormalized amplitudes).
    ApplyLowering { excitation: usize },
    /// The normalized post-detection state `(phi |0> + kappa |1>)/norm`.
    DetectionState { phi: T, kappa: T },
    /// pi/2 pulse then J_x measurement on the detection state.
    Homodyne { phi: T, kappa: T },
}

/// Oracle output: raw Dicke-basis amplitudes or a homodyne distribution.
#[derive(Clone, Debug)]
pub enum Outcome<T> {
    /// Amplitudes on the Dicke basis (index = excitation number). Not
    /// normalized for [`Scenario::ApplyLowering`].
    State(Array1<Complex<T>>),
    Distribution(HomodyneDistribution<T>),
}

impl<T> Outcome<T> {
    pub fn state(self) -> Array1<Complex<T>> {
        match self {
            Outcome::State(v) => v,
            Outcome::Distribution(_) => panic!("oracle returned a distribution, not a state"),
        }
    }

    pub fn distribution(self) -> HomodyneDistribution<T> {
        match self {
            Outcome::Distribution(d) => d,
            Outcome::State(_) => panic!("oracle returned a state, not a distribution"),
        }
    }
}

/// Run `scenario` on the full 2^N_A product space.
pub fn brute_force_oracle<T: Real>(n_atoms: usize, scenario: Scenario<T>) -> Result<Outcome<T>> {
    if n_atoms == 0 {
        return Err(Error::InvalidAtomCount {
            n_atoms,
            max: MAX_ORACLE_ATOMS,
        });
    }
    if n_atoms > MAX_ORACLE_ATOMS {
        return Err(Error::OracleScale {
            n_atoms,
            max: MAX_ORACLE_ATOMS,
        });
    }
    match scenario {
        Scenario::DickeState { excitation } => {
            let full = prepare_dicke(n_atoms, excitation)?;
            Ok(Outcome::State(project_symmetric(n_atoms, &full)))
        }
        Scenario::ApplyLowering { excitation } => {
            let full = prepare_dicke(n_atoms, excitation)?;
            let lowered = apply_lowering(n_atoms, &full);
            Ok(Outcome::State(project_symmetric(n_atoms, &lowered)))
        }
        Scenario::DetectionState { phi, kappa } => {
            let full = prepare_detection(n_atoms, phi, kappa)?;
            Ok(Outcome::State(project_symmetric(n_atoms, &full)))
        }
        Scenario::Homodyne { phi, kappa } => {
            let mut full = prepare_detection(n_atoms, phi, kappa)?;
            rotate_half_pi(n_atoms, &mut full);
            Ok(Outcome::Distribution(jx_distribution(n_atoms, &full)))
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Symmetric state with `excitation` atoms flipped: amplitude
/// `1/sqrt(C(N, k))` on every popcount-k basis state.
fn prepare_dicke<T: Real>(n_atoms: usize, excitation: usize) -> Result<Vec<Complex<T>>> {
    if excitation > n_atoms {
        return Err(Error::InvalidParameter {
            name: "excitation",
            bound: "<= n_atoms",
            value: excitation as f64,
        });
    }
    let amp = T::from_f64(1.0 / binomial(n_atoms, excitation).sqrt());
    let mut state = vec![Complex::new(T::zero(), T::zero()); 1 << n_atoms];
    for (b, slot) in state.iter_mut().enumerate() {
        if b.count_ones() as usize == excitation {
            *slot = Complex::new(amp, T::zero());
        }
    }
    Ok(state)
}

fn prepare_detection<T: Real>(n_atoms: usize, phi: T, kappa: T) -> Result<Vec<Complex<T>>> {
    let norm_sq = phi * phi + kappa * kappa;
    if norm_sq.to_f64() < 1e-300 {
        return Err(Error::ImpossibleDetection);
    }
    let norm = norm_sq.sqrt();
    let d0 = prepare_dicke::<T>(n_atoms, 0)?;
    let d1 = prepare_dicke::<T>(n_atoms, 1)?;
    let cp = Complex::new(phi / norm, T::zero());
    let ck = Complex::new(kappa / norm, T::zero());
    Ok(d0
        .iter()
        .zip(d1.iter())
        .map(|(a, b)| *a * cp + *b * ck)
        .collect())
}

/// `J_- = sum_k |s><g|_k`: flip each unexcited atom in turn.
fn apply_lowering<T: Real>(n_atoms: usize, state: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); state.len()];
    for (b, amp) in state.iter().enumerate() {
        if amp.norm_sqr() == T::zero() {
            continue;
        }
        for atom in 0..n_atoms {
            let bit = 1usize << atom;
            if b & bit == 0 {
                out[b | bit] += *amp;
            }
        }
    }
    out
}

/// Apply `exp(-i (pi/2) J_z)` as the per-atom gate
/// `[[1, -1], [1, 1]]/sqrt(2)` on every atom.
fn rotate_half_pi<T: Real>(n_atoms: usize, state: &mut [Complex<T>]) {
    let inv_sqrt2 = T::from_f64(std::f64::consts::FRAC_1_SQRT_2);
    for atom in 0..n_atoms {
        let bit = 1usize << atom;
        for b in 0..state.len() {
            if b & bit == 0 {
                let g = state[b];
                let s = state[b | bit];
                state[b] = (g - s) * inv_sqrt2;
                state[b | bit] = (g + s) * inv_sqrt2;
            }
        }
    }
}

/// Projective J_x measurement: basis state with popcount k has
/// `J_x = N_A/2 - k`; outcomes carry the engine's labels
/// `x_k = (k - N_A/2)/sqrt(N_A/2)`.
fn jx_distribution<T: Real>(n_atoms: usize, state: &[Complex<T>]) -> HomodyneDistribution<T> {
    let j = T::from_usize(n_atoms) / T::from_f64(2.0);
    let scale = j.sqrt();
    let mut probs = vec![T::zero(); n_atoms + 1];
    for (b, amp) in state.iter().enumerate() {
        probs[b.count_ones() as usize] += amp.norm_sqr();
    }
    let points = probs
        .into_iter()
        .enumerate()
        .map(|(k, p)| ((T::from_usize(k) - j) / scale, p))
        .collect();
    HomodyneDistribution::from_points(points)
}

/// Overlap with each symmetric Dicke state.
fn project_symmetric<T: Real>(n_atoms: usize, state: &[Complex<T>]) -> Array1<Complex<T>> {
    let mut amps: Array1<Complex<T>> = Array1::zeros(n_atoms + 1);
    let coeff: Vec<T> = (0..=n_atoms)
        .map(|k| T::from_f64(1.0 / binomial(n_atoms, k).sqrt()))
        .collect();
    for (b, amp) in state.iter().enumerate() {
        let k = b.count_ones() as usize;
        amps[k] += *amp * coeff[k];
    }
    amps
}
