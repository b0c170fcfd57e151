//! Truncated-Fock-space core for the measurement pointer.
//!
//! The pointer's Gaussian wave packet of width `w` is treated as the ground
//! state of a fictional oscillator with annihilation operator
//! `a = (X/w + i w P)/sqrt(2)`, so `psi_0(x) = e^{-x^2/2w^2} w^{-1/2} pi^{-1/4}`
//! and `psi_1 = (sqrt(2) x / w) psi_0`. States are amplitude vectors over
//! `|0> .. |D-1>`; position-space values come from orthonormal Hermite
//! functions evaluated by the stable three-term recurrence.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Default Fock truncation. The protocol populates levels beyond |1> only
/// at higher order in the coupling, so 32 levels leave the leakage guard
/// dozens of orders of magnitude of headroom.
pub const DEFAULT_FOCK_DIM: usize = 32;

/// Maximum tolerated probability weight in the top two Fock levels for any
/// operation that grows excitation number.
pub const LEAKAGE_LIMIT: f64 = 1e-10;

/// Norm deviation tolerated before a state is rejected as unnormalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Pointer state: complex amplitudes over the truncated Fock basis plus the
/// Gaussian width identifying the position representation.
#[derive(Clone, Debug, PartialEq)]
pub struct PointerState<T> {
    dim: usize,
    width: T,
    amps: Array1<Complex<T>>,
}

impl<T: Real> PointerState<T> {
    /// Ground state |0>: the undisplaced Gaussian of width `w`.
    pub fn ground(dim: usize, width: T) -> Result<Self> {
        Self::fock(dim, 0, width)
    }

    /// Fock basis state |n>.
    pub fn fock(dim: usize, n: usize, width: T) -> Result<Self> {
        check_dim(dim)?;
        check_width(width)?;
        if n >= dim {
            return Err(Error::InvalidParameter {
                name: "n",
                bound: "< dim",
                value: n as f64,
            });
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = Complex::new(T::one(), T::zero());
        Ok(PointerState { dim, width, amps })
    }

    /// Normalizing constructor from raw amplitudes.
    pub fn from_amps(width: T, amps: Array1<Complex<T>>) -> Result<Self> {
        check_dim(amps.len())?;
        check_width(width)?;
        let norm_sq: T = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= T::zero() {
            return Err(Error::NotNormalized {
                deviation: 1.0,
                limit: NORM_TOLERANCE,
            });
        }
        let scale = T::one() / norm_sq.sqrt();
        let amps = amps.mapv(|z| z * scale);
        Ok(PointerState {
            dim: amps.len(),
            width,
            amps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn amps(&self) -> &Array1<Complex<T>> {
        &self.amps
    }

    pub fn norm_sq(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Probability weight in the top two Fock levels.
    pub fn leakage(&self) -> T {
        leakage(&self.amps)
    }
}

/// Probability weight of an amplitude vector's top two entries.
pub fn leakage<T: Real>(amps: &Array1<Complex<T>>) -> T {
    let d = amps.len();
    amps[d - 1].norm_sqr() + amps[d - 2].norm_sqr()
}

/// Dense matrix acting on the truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<T> {
    dim: usize,
    entries: Array2<Complex<T>>,
}

impl<T: Real> FockOperator<T> {
    pub fn from_matrix(entries: Array2<Complex<T>>) -> Result<Self> {
        let dim = entries.nrows();
        check_dim(dim)?;
        if entries.ncols() != dim {
            return Err(Error::InvalidParameter {
                name: "entries",
                bound: "square",
                value: entries.ncols() as f64,
            });
        }
        Ok(FockOperator { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex<T>> {
        &self.entries
    }

    pub fn apply(&self, amps: &Array1<Complex<T>>) -> Array1<Complex<T>> {
        self.entries.dot(amps)
    }

    pub fn dagger(&self) -> Self {
        FockOperator {
            dim: self.dim,
            entries: crate::linalg::dagger(&self.entries),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDimension { dim })
    } else {
        Ok(())
    }
}

fn check_width<T: Real>(width: T) -> Result<()> {
    if width > T::zero() && width.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "width",
            bound: "> 0",
            value: width.to_f64(),
        })
    }
}

/// Annihilation and creation operators on the truncated basis:
/// `a[n-1, n] = sqrt(n)`, `a_dag = a^H`.
pub fn make_ladder<T: Real>(dim: usize) -> Result<(FockOperator<T>, FockOperator<T>)> {
    check_dim(dim)?;
    let mut a: Array2<Complex<T>> = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = Complex::new(T::from_usize(n).sqrt(), T::zero());
    }
    let a = FockOperator { dim, entries: a };
    let a_dag = a.dagger();
    Ok((a, a_dag))
}

/// Ground state |0> identified with the Gaussian of width `w`.
pub fn ground_state<T: Real>(dim: usize, width: T) -> Result<PointerState<T>> {
    PointerState::ground(dim, width)
}

/// Orthonormal Hermite functions `h_0(u) .. h_{n_max}(u)`.
///
/// `h_0 = pi^{-1/4} e^{-u^2/2}`, `h_1 = sqrt(2) u h_0`, and
/// `h_{n+1} = sqrt(2/(n+1)) u h_n - sqrt(n/(n+1)) h_{n-1}`. Running the
/// recurrence on the normalized functions keeps every value O(1) out to
/// large n, unlike raw Hermite polynomials.
pub fn hermite_functions<T: Real>(n_max: usize, u: T) -> Vec<T> {
    let mut h = Vec::with_capacity(n_max + 1);
    let h0 = T::from_f64(std::f64::consts::PI.powf(-0.25)) * (-u * u / T::from_f64(2.0)).exp();
    h.push(h0);
    if n_max == 0 {
        return h;
    }
    h.push(T::from_f64(2.0).sqrt() * u * h0);
    for n in 1..n_max {
        let np1 = T::from_usize(n + 1);
        let next = (T::from_f64(2.0) / np1).sqrt() * u * h[n] - (T::from_usize(n) / np1).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Position-space value `psi(x) = sum_n amps[n] h_n(x/w) / sqrt(w)`.
pub fn position_wavefunction<T: Real>(state: &PointerState<T>, x: T) -> Complex<T> {
    let w = state.width();
    let u = x / w;
    let h = hermite_functions::<T>(state.dim() - 1, u);
    let inv_sqrt_w = T::one() / w.sqrt();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (c, hn) in state.amps().iter().zip(h.iter()) {
        acc += *c * (*hn * inv_sqrt_w);
    }
    acc
}

/// Overlap of two displaced ground-state Gaussians of common width `w`:
/// `<psi_0(x - d1) | psi_0(x - d2)> = exp(-(d1-d2)^2 / 4w^2)`.
pub fn displaced_gaussian_overlap<T: Real>(d1: T, d2: T, w: T) -> T {
    let delta = d1 - d2;
    (-delta * delta / (T::from_f64(4.0) * w * w)).exp()
}

/// Mean pointer position `<X>` with `X = w (a + a_dag) / sqrt(2)`.
pub fn mean_position<T: Real>(state: &PointerState<T>) -> Result<T> {
    let norm_sq = state.norm_sq();
    let deviation = (norm_sq - T::one()).abs().to_f64();
    if deviation > NORM_TOLERANCE {
        return Err(Error::NotNormalized {
            deviation,
            limit: NORM_TOLERANCE,
        });
    }
    let amps = state.amps();
    let mut acc = T::zero();
    for n in 0..state.dim() - 1 {
        acc += T::from_usize(n + 1).sqrt() * (amps[n].conj() * amps[n + 1]).re;
    }
    Ok(state.width() * T::from_f64(2.0).sqrt() * acc)
}
