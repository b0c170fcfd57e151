//! Photon + atomic-ensemble realization on the symmetric (Dicke) subspace.
//!
//! An ensemble of `N_A` two-level atoms starts with every atom in |g>; a
//! Raman-scattered (Stokes) photon flips one atom into |s>, taking the
//! collective state from the fully polarized state to the symmetric
//! singly-excited Dicke state. Near full polarization the collective spin
//! behaves like an oscillator (Holstein-Primakoff): `X = J_y/sqrt(N_A/2)`,
//! `P = J_z/sqrt(N_A/2)`, and `J_- = J_y - i J_z` plays `sqrt(N_A) a_dag`.
//!
//! Basis ordering: Dicke index = number of atoms in |s>, ascending, so the
//! J_x eigenvalue of index `k` is `N_A/2 - k`.
//!
//! Atomic homodyne detection applies the pi/2 pulse `exp(-i (pi/2) J_z)`
//! and reads the population difference J_x; the pulse maps J_y statistics
//! onto J_x up to a sign that is absorbed into the outcome labels
//! `x_k = (k - N_A/2)/sqrt(N_A/2)`, chosen so a state displaced toward
//! positive X reports a positive mean.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::PositionGrid;
use crate::linalg;
use crate::pointer_fock::PointerState;
use crate::real::Real;
use crate::weak_protocol::conditional_pdf;

/// Largest atom count accepted by the dense Dicke-subspace engine.
pub const MAX_ATOMS: usize = 4096;

/// State of the ensemble restricted to the symmetric subspace; `amps[k]`
/// is the amplitude of the Dicke state with `k` atoms in |s>.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState<T> {
    n_atoms: usize,
    amps: Array1<Complex<T>>,
}

impl<T: Real> DickeState<T> {
    /// Dicke basis state with `excitation` atoms in |s>; index 0 is the
    /// all-ground state, index 1 the symmetric singly-excited state.
    pub fn excited(n_atoms: usize, excitation: usize) -> Result<Self> {
        check_atoms(n_atoms)?;
        if excitation > n_atoms {
            return Err(Error::InvalidParameter {
                name: "excitation",
                bound: "<= n_atoms",
                value: excitation as f64,
            });
        }
        let mut amps = Array1::zeros(n_atoms + 1);
        amps[excitation] = Complex::new(T::one(), T::zero());
        Ok(DickeState { n_atoms, amps })
    }

    /// Normalizing constructor from raw amplitudes (length `n_atoms + 1`).
    pub fn from_amps(n_atoms: usize, amps: Array1<Complex<T>>) -> Result<Self> {
        check_atoms(n_atoms)?;
        if amps.len() != n_atoms + 1 {
            return Err(Error::InvalidParameter {
                name: "amps",
                bound: "of length n_atoms + 1",
                value: amps.len() as f64,
            });
        }
        let norm_sq: T = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= T::zero() {
            return Err(Error::NotNormalized {
                deviation: 1.0,
                limit: 1e-12,
            });
        }
        let scale = T::one() / norm_sq.sqrt();
        Ok(DickeState {
            n_atoms,
            amps: amps.mapv(|z| z * scale),
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn amps(&self) -> &Array1<Complex<T>> {
        &self.amps
    }
}

/// Collective spin matrices on the Dicke subspace, in the J_x eigenbasis
/// ordered by descending eigenvalue (index = excitation number).
#[derive(Clone, Debug)]
pub struct CollectiveSpinOps<T> {
    n_atoms: usize,
    pub jx: Array2<Complex<T>>,
    pub jy: Array2<Complex<T>>,
    pub jz: Array2<Complex<T>>,
}

impl<T: Real> CollectiveSpinOps<T> {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// The excitation-creating ladder operator `J_- = J_y - i J_z`, with
    /// `J_- |k> = sqrt((N_A - k)(k + 1)) |k+1>`.
    pub fn lowering(&self) -> Array2<Complex<T>> {
        let i = Complex::new(T::zero(), T::one());
        &self.jy - &self.jz.mapv(|z| z * i)
    }
}

fn check_atoms(n_atoms: usize) -> Result<()> {
    if n_atoms == 0 || n_atoms > MAX_ATOMS {
        Err(Error::InvalidAtomCount {
            n_atoms,
            max: MAX_ATOMS,
        })
    } else {
        Ok(())
    }
}

/// Build spin-j matrices with `j = N_A/2` in the J_x eigenbasis.
///
/// The construction places the standard ladder coefficients
/// `sqrt((N_A - k)(k + 1))` on the excitation ladder, which makes
/// `[J_y, J_z] = i J_x` an exact matrix identity (up to rounding in the
/// square roots).
pub fn build_spin_ops<T: Real>(n_atoms: usize) -> Result<CollectiveSpinOps<T>> {
    check_atoms(n_atoms)?;
    let dim = n_atoms + 1;
    let j = T::from_usize(n_atoms) / T::from_f64(2.0);

    let mut jx: Array2<Complex<T>> = Array2::zeros((dim, dim));
    for k in 0..dim {
        jx[[k, k]] = Complex::new(j - T::from_usize(k), T::zero());
    }

    // ladder J_- (index k -> k+1) and its adjoint
    let mut jm: Array2<Complex<T>> = Array2::zeros((dim, dim));
    for k in 0..n_atoms {
        let c = (T::from_usize(n_atoms - k) * T::from_usize(k + 1)).sqrt();
        jm[[k + 1, k]] = Complex::new(c, T::zero());
    }
    let jp = linalg::dagger(&jm);

    let half = Complex::new(T::from_f64(0.5), T::zero());
    let minus_half_i = Complex::new(T::zero(), -T::from_f64(0.5));
    let jy = (&jp + &jm).mapv(|z| z * half);
    // J_z = (J_+ - J_-)/(2i)
    let jz = (&jp - &jm).mapv(|z| z * minus_half_i);

    Ok(CollectiveSpinOps { n_atoms, jx, jy, jz })
}

/// Holstein-Primakoff quadratures `X = J_y/sqrt(N_A/2)`, `P = J_z/sqrt(N_A/2)`.
///
/// `[X, P] = i J_x/(N_A/2)`, which acts as `i` times the identity on the
/// fully polarized state and acquires `1 - 2k/N_A` corrections with
/// excitation number k.
pub fn hp_quadratures<T: Real>(
    ops: &CollectiveSpinOps<T>,
) -> (Array2<Complex<T>>, Array2<Complex<T>>) {
    let scale = (T::from_usize(ops.n_atoms()) / T::from_f64(2.0)).sqrt();
    let x = ops.jy.mapv(|z| z / scale);
    let p = ops.jz.mapv(|z| z / scale);
    (x, p)
}

/// Two-mode photon sector (write mode x+, Stokes mode x-) with fixed total
/// photon number, joint with the Dicke subspace. `amps[(k, m)]` is the
/// amplitude of `k` Stokes photons and `m` atomic excitations.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonEnsembleState<T> {
    n_photons: usize,
    n_atoms: usize,
    amps: Array2<Complex<T>>,
    normalized: bool,
}

impl<T: Real> PhotonEnsembleState<T> {
    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn amps(&self) -> &Array2<Complex<T>> {
        &self.amps
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sq(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Validity guard for the first-order Raman model.
pub const RAMAN_FIRST_ORDER_LIMIT: f64 = 0.3;

/// First-order Raman scattering of an N-photon write beam:
/// `|N, 0>|0> + kappa sqrt(N) |N-1, 1>|1>` (unnormalized).
///
/// The sqrt(N) enhancement comes from `a_{x+}` acting on the N-photon write
/// mode in the generator `a_dag_{x-} a_{x+} J_-/sqrt(N_A)`. Requires
/// `kappa sqrt(N) <= 0.3` so the dropped higher orders stay below ~10%.
pub fn raman_scatter_first_order<T: Real>(
    n_photons: usize,
    n_atoms: usize,
    kappa: T,
) -> Result<PhotonEnsembleState<T>> {
    check_atoms(n_atoms)?;
    if n_photons == 0 {
        return Err(Error::InvalidParameter {
            name: "n_photons",
            bound: ">= 1",
            value: 0.0,
        });
    }
    if kappa < T::zero() {
        return Err(Error::InvalidParameter {
            name: "kappa",
            bound: ">= 0",
            value: kappa.to_f64(),
        });
    }
    let amplitude = kappa * T::from_usize(n_photons).sqrt();
    if amplitude.to_f64() > RAMAN_FIRST_ORDER_LIMIT {
        return Err(Error::OutOfRegime {
            name: "kappa * sqrt(n_photons)",
            value: amplitude.to_f64(),
            limit: RAMAN_FIRST_ORDER_LIMIT,
        });
    }
    let mut amps: Array2<Complex<T>> = Array2::zeros((n_photons + 1, n_atoms + 1));
    amps[[0, 0]] = Complex::new(T::one(), T::zero());
    amps[[1, 1]] = Complex::new(amplitude, T::zero());
    Ok(PhotonEnsembleState {
        n_photons,
        n_atoms,
        amps,
        normalized: amplitude == T::zero(),
    })
}

/// Forward detection of a single photon with the operator
/// `phi a_{x+} + a_{x-}`, followed by projection onto the configuration
/// with no Stokes photon left.
///
/// Returns the normalized post-detection atomic state and the detection
/// weight (squared norm of the selected component over the squared norm of
/// the input). For first-order input the atomic state is
/// `(phi |0> + kappa |1>)/sqrt(phi^2 + kappa^2)` independent of N.
pub fn detect_photon<T: Real>(
    state: &PhotonEnsembleState<T>,
    phi: T,
) -> Result<(DickeState<T>, T)> {
    if !(phi >= T::zero() && phi < T::one()) {
        return Err(Error::InvalidParameter {
            name: "phi",
            bound: "in [0, 1)",
            value: phi.to_f64(),
        });
    }
    let n = state.n_photons();
    let cols = state.n_atoms() + 1;
    // row k of the detected state (total photons N-1):
    //   phi sqrt(N - k) amps[k, m]  (write-photon annihilation)
    // + sqrt(k + 1) amps[k+1, m]    (Stokes annihilation)
    // The k = 0 row is the "no Stokes photon left" configuration.
    let mut atomic: Array1<Complex<T>> = Array1::zeros(cols);
    let sqrt_n = T::from_usize(n).sqrt();
    for m in 0..cols {
        atomic[m] = state.amps()[[0, m]] * Complex::new(phi * sqrt_n, T::zero())
            + state.amps()[[1, m]];
    }
    let weight_raw: T = atomic.iter().map(|z| z.norm_sqr()).sum();
    if weight_raw.to_f64() < 1e-300 {
        return Err(Error::ImpossibleDetection);
    }
    let weight = weight_raw / state.norm_sq();
    let atomic = DickeState::from_amps(state.n_atoms(), atomic)?;
    Ok((atomic, weight))
}

/// Discrete homodyne outcome distribution: `(x, probability)` pairs with
/// outcomes ascending in x.
#[derive(Clone, Debug, PartialEq)]
pub struct HomodyneDistribution<T> {
    points: Vec<(T, T)>,
}

impl<T: Real> HomodyneDistribution<T> {
    /// Assemble from `(x, probability)` pairs; outcomes must be ascending.
    pub fn from_points(points: Vec<(T, T)>) -> Self {
        debug_assert!(points.len() >= 2);
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
        HomodyneDistribution { points }
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn mean(&self) -> T {
        self.points.iter().map(|&(x, p)| x * p).sum()
    }

    pub fn total(&self) -> T {
        self.points.iter().map(|&(_, p)| p).sum()
    }

    /// Outcome spacing `1/sqrt(N_A/2)`.
    pub fn spacing(&self) -> T {
        self.points[1].0 - self.points[0].0
    }
}

/// Atomic homodyne detection: apply the pi/2 pulse `exp(-i (pi/2) J_z)`,
/// measure J_x projectively, and label the outcome with index k as
/// `x_k = (k - N_A/2)/sqrt(N_A/2)` (the sign flip relative to the raw J_x
/// eigenvalue makes the labels follow J_y of the unrotated state).
pub fn atomic_homodyne_distribution<T: Real>(
    atomic: &DickeState<T>,
) -> Result<HomodyneDistribution<T>> {
    let n_atoms = atomic.n_atoms();
    let ops = build_spin_ops::<T>(n_atoms)?;
    let phase = Complex::new(T::zero(), -T::FRAC_PI_2());
    let generator = ops.jz.mapv(|z| z * phase);
    let rotated = linalg::expm_apply(&generator, atomic.amps());

    let j = T::from_usize(n_atoms) / T::from_f64(2.0);
    let scale = j.sqrt();
    let points = rotated
        .iter()
        .enumerate()
        .map(|(k, z)| ((T::from_usize(k) - j) / scale, z.norm_sqr()))
        .collect();
    Ok(HomodyneDistribution { points })
}

/// Total-variation distance between a homodyne distribution and the
/// continuum pdf `|phi psi_0 + kappa psi_1|^2 / (phi^2 + kappa^2)` (w = 1)
/// binned on the outcome lattice. Continuum mass outside the lattice
/// counts toward the distance.
pub fn tv_to_continuum<T: Real>(dist: &HomodyneDistribution<T>, phi: T, kappa: T) -> Result<T> {
    let mut amps: Array1<Complex<T>> = Array1::zeros(2);
    amps[0] = Complex::new(phi, T::zero());
    amps[1] = Complex::new(kappa, T::zero());
    let pointer = PointerState::from_amps(T::one(), amps)?;

    let spacing = dist.spacing();
    let half = T::from_f64(0.5);
    let first_edge = dist.points()[0].0 - spacing * half;
    let n_bins = dist.points().len();

    let grid: PositionGrid<T> = PositionGrid::standard(T::one(), T::zero(), T::zero());
    let mut binned = vec![T::zero(); n_bins];
    let mut total = T::zero();
    for x in grid.nodes() {
        let mass = conditional_pdf(&pointer, x) * grid.step();
        total += mass;
        let t = ((x - first_edge) / spacing).floor().to_f64();
        if t >= 0.0 && (t as usize) < n_bins {
            binned[t as usize] += mass;
        }
    }
    let inside: T = binned.iter().copied().sum();
    let outside = (total - inside).max(T::zero());
    let mut tv = outside;
    for (q, &(_, p)) in binned.iter().zip(dist.points()) {
        tv += (p - *q).abs();
    }
    Ok(tv * half)
}
