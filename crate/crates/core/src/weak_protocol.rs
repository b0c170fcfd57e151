//! The qubit (x) pointer weak-measurement protocol.
//!
//! The system starts in |x+> and couples to the pointer through
//! `H = chi sigma_z P`, written on the fictional oscillator as
//! `H = -i (chi / sqrt(2) w) sigma_z (a - a_dag)`. With the dimensionless
//! coupling `kappa = chi t / sqrt(2) w`:
//!
//! - to first order the joint state is `|x+>|0> + kappa |x->|1>`;
//! - exactly, each sigma_z eigensector carries a pointer displaced by
//!   `-+ chi t = -+ sqrt(2) w kappa`, i.e. a coherent state |+-kappa>.
//!
//! Sign convention: sigma_z = +1 displaces X in the + direction
//! (`e^{-isP}` translates by +s); post-selecting with phi, kappa > 0 then
//! yields a positive mean displacement.
//!
//! Post-selection projects the system onto `(phi |x+> + |x->)/sqrt(1+phi^2)`
//! and leaves the pointer in `phi |0> + kappa |1>` (first order), displaced
//! by `sqrt(2) w kappa / phi` in the weak-value regime kappa << phi << 1.

use ndarray::Array1;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pointer_fock::{leakage, PointerState, LEAKAGE_LIMIT};
use crate::real::Real;

/// Protocol parameters: coupling `kappa`, post-selection admixture `phi`,
/// pointer width and background-noise probability `beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolParams<T> {
    kappa: T,
    phi: T,
    width: T,
    beta: T,
}

impl<T: Real> ProtocolParams<T> {
    /// Validates the protocol ranges: `0 <= kappa < 1`, `0 <= phi < 1`,
    /// `width > 0`, `0 <= beta < 1`.
    pub fn new(kappa: T, phi: T, width: T, beta: T) -> Result<Self> {
        if !(kappa >= T::zero() && kappa < T::one()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                bound: "in [0, 1)",
                value: kappa.to_f64(),
            });
        }
        if !(phi >= T::zero() && phi < T::one()) {
            return Err(Error::InvalidParameter {
                name: "phi",
                bound: "in [0, 1)",
                value: phi.to_f64(),
            });
        }
        if !(width > T::zero() && width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "width",
                bound: "> 0",
                value: width.to_f64(),
            });
        }
        if !(beta >= T::zero() && beta < T::one()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                bound: "in [0, 1)",
                value: beta.to_f64(),
            });
        }
        Ok(ProtocolParams {
            kappa,
            phi,
            width,
            beta,
        })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Pointer displacement of a sigma_z eigensector, `chi t = sqrt(2) w kappa`.
    pub fn displacement(&self) -> T {
        T::from_f64(2.0).sqrt() * self.width * self.kappa
    }
}

/// System (x) pointer state, stored on the sigma_x basis {|x+>, |x->}.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState<T> {
    dim: usize,
    width: T,
    amps_plus: Array1<Complex<T>>,
    amps_minus: Array1<Complex<T>>,
    normalized: bool,
}

impl<T: Real> JointState<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn amps_plus(&self) -> &Array1<Complex<T>> {
        &self.amps_plus
    }

    pub fn amps_minus(&self) -> &Array1<Complex<T>> {
        &self.amps_minus
    }

    /// Whether the constructor produced a unit-norm state; first-order
    /// evolution is deliberately left unnormalized at `1 + kappa^2`.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sq(&self) -> T {
        let p: T = self.amps_plus.iter().map(|z| z.norm_sqr()).sum();
        let m: T = self.amps_minus.iter().map(|z| z.norm_sqr()).sum();
        p + m
    }
}

/// First-order entangled state `|x+>|0> + kappa |x->|1>` (unnormalized).
pub fn evolve_first_order<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
) -> Result<JointState<T>> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let mut amps_plus: Array1<Complex<T>> = Array1::zeros(dim);
    let mut amps_minus: Array1<Complex<T>> = Array1::zeros(dim);
    amps_plus[0] = Complex::new(T::one(), T::zero());
    amps_minus[1] = Complex::new(params.kappa(), T::zero());
    Ok(JointState {
        dim,
        width: params.width(),
        amps_plus,
        amps_minus,
        normalized: params.kappa() == T::zero(),
    })
}

/// Fock amplitudes of the coherent state |alpha> for real alpha:
/// `c_n = e^{-alpha^2/2} alpha^n / sqrt(n!)`.
fn coherent_amps<T: Real>(alpha: T, dim: usize) -> Array1<Complex<T>> {
    let mut amps = Array1::zeros(dim);
    let mut c = (-alpha * alpha / T::from_f64(2.0)).exp();
    amps[0] = Complex::new(c, T::zero());
    for n in 1..dim {
        c = c * alpha / T::from_usize(n).sqrt();
        amps[n] = Complex::new(c, T::zero());
    }
    amps
}

/// Exact evolution `e^{-iHt} |x+>|0>` in closed form.
///
/// Each sigma_z sector is the coherent state |+-kappa> (pointer displaced
/// by +-sqrt(2) w kappa); recombining into the x basis gives the even part
/// on |x+> and the odd part on |x->. Fails with a truncation error if the
/// top two Fock levels pick up more than [`LEAKAGE_LIMIT`] weight.
pub fn evolve_exact<T: Real>(params: &ProtocolParams<T>, dim: usize) -> Result<JointState<T>> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let plus_sector = coherent_amps(params.kappa(), dim);
    let minus_sector = coherent_amps(-params.kappa(), dim);
    let half = Complex::new(T::from_f64(0.5), T::zero());
    // |x+>(|k> + |-k>)/2 + |x->(|k> - |-k>)/2
    let amps_plus = (&plus_sector + &minus_sector).mapv(|z| z * half);
    let amps_minus = (&plus_sector - &minus_sector).mapv(|z| z * half);

    let leak = (leakage(&amps_plus) + leakage(&amps_minus)).to_f64();
    if leak > LEAKAGE_LIMIT {
        return Err(Error::Truncation {
            leakage: leak,
            limit: LEAKAGE_LIMIT,
        });
    }
    Ok(JointState {
        dim,
        width: params.width(),
        amps_plus,
        amps_minus,
        normalized: true,
    })
}

/// Result of post-selecting the system.
#[derive(Clone, Debug)]
pub struct PostSelected<T> {
    /// Normalized conditional pointer state.
    pub pointer: PointerState<T>,
    /// Exact success probability, all normalization factors kept:
    /// `|<f|Psi>|^2 / <Psi|Psi>` with `|f> = (phi|x+> + |x->)/sqrt(1+phi^2)`.
    pub prob: T,
    /// Leading-order weight `||phi psi_+ + psi_-||^2`, which reduces to
    /// `phi^2 + kappa^2` for the first-order state. Reported alongside the
    /// exact value so the two conventions stay comparable.
    pub prob_leading: T,
}

/// Project the system onto `(phi |x+> + |x->)/sqrt(1+phi^2)`.
pub fn post_select<T: Real>(state: &JointState<T>, phi: T) -> Result<PostSelected<T>> {
    if !(phi >= T::zero() && phi < T::one()) {
        return Err(Error::InvalidParameter {
            name: "phi",
            bound: "in [0, 1)",
            value: phi.to_f64(),
        });
    }
    let phi_c = Complex::new(phi, T::zero());
    let raw: Array1<Complex<T>> = state
        .amps_plus()
        .iter()
        .zip(state.amps_minus().iter())
        .map(|(p, m)| *p * phi_c + *m)
        .collect();
    let raw_norm_sq: T = raw.iter().map(|z| z.norm_sqr()).sum();
    if raw_norm_sq.to_f64() < 1e-300 {
        return Err(Error::ImpossiblePostSelection);
    }
    let prob = raw_norm_sq / ((T::one() + phi * phi) * state.norm_sq());
    let pointer = PointerState::from_amps(state.width(), raw)?;
    Ok(PostSelected {
        pointer,
        prob,
        prob_leading: raw_norm_sq,
    })
}

/// The weak value `<f|sigma_z|i>/<f|i> = 1/phi`.
pub fn weak_value<T: Real>(phi: T) -> Result<T> {
    if phi <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "phi",
            bound: "> 0 (weak value undefined at the dark port)",
            value: phi.to_f64(),
        });
    }
    Ok(T::one() / phi)
}

/// Measurement regime implied by (kappa, phi).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// kappa << phi << 1: amplified displacement, probability ~ phi^2.
    WeakValue,
    /// phi <= kappa: the |1> component dominates; phi = 0 is the dark port.
    DarkPort,
    /// phi of order one: no post-selection suppression, no amplification.
    BrightPort,
    /// Between the regimes; no clean description applies.
    Invalid,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::WeakValue => "weak_value",
            Regime::DarkPort => "dark_port",
            Regime::BrightPort => "bright_port",
            Regime::Invalid => "invalid",
        }
    }
}

/// Classify (kappa, phi) into a regime.
///
/// The thresholds operationalize the "much smaller" conditions: weak-value
/// needs `kappa <= phi/5` and `phi <= 0.2` (first-order corrections below
/// 4%), the dark port is `phi <= kappa`, and `phi > 0.2` counts as bright.
pub fn classify_regime<T: Real>(params: &ProtocolParams<T>) -> Regime {
    let kappa = params.kappa();
    let phi = params.phi();
    let five = T::from_f64(5.0);
    let point_two = T::from_f64(0.2);
    if phi <= kappa {
        Regime::DarkPort
    } else if phi > point_two {
        Regime::BrightPort
    } else if kappa * five <= phi {
        Regime::WeakValue
    } else {
        Regime::Invalid
    }
}

/// Position-space probability density of a normalized pointer state.
pub fn conditional_pdf<T: Real>(pointer: &PointerState<T>, x: T) -> T {
    crate::pointer_fock::position_wavefunction(pointer, x).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PositionGrid;
    use crate::pointer_fock::mean_position;
    use approx::assert_abs_diff_eq;

    fn params(kappa: f64, phi: f64) -> ProtocolParams<f64> {
        ProtocolParams::new(kappa, phi, 1.0, 0.0).unwrap()
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(ProtocolParams::new(1.0, 0.1, 1.0, 0.0).is_err());
        assert!(ProtocolParams::new(0.1, 1.5, 1.0, 0.0).is_err());
        assert!(ProtocolParams::new(0.1, 0.1, 0.0, 0.0).is_err());
        assert!(ProtocolParams::new(0.1, 0.1, 1.0, 1.0).is_err());
        assert!(ProtocolParams::new(-0.1, 0.1, 1.0, 0.0).is_err());
    }

    #[test]
    fn first_order_state_layout() {
        let s = evolve_first_order(&params(0.1, 0.0), 8).unwrap();
        assert_eq!(s.amps_plus()[0].re, 1.0);
        assert_eq!(s.amps_minus()[1].re, 0.1);
        assert!(!s.is_normalized());
        let other: f64 = s.amps_plus().iter().skip(1).map(|z| z.norm_sqr()).sum();
        assert_eq!(other, 0.0);
    }

    #[test]
    fn first_order_norm_is_one_plus_kappa_sq() {
        for kappa in [0.0, 0.05, 0.3, 0.9] {
            let s = evolve_first_order(&params(kappa, 0.0), 8).unwrap();
            assert_abs_diff_eq!(s.norm_sq(), 1.0 + kappa * kappa, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_coupling_is_product_state() {
        let s = evolve_first_order(&params(0.0, 0.1), 8).unwrap();
        assert_eq!(s.amps_plus()[0].re, 1.0);
        assert!(s.amps_minus().iter().all(|z| z.norm() == 0.0));
        assert!(s.is_normalized());

        let e = evolve_exact(&params(0.0, 0.1), 8).unwrap();
        assert_eq!(e.amps_plus()[0].re, 1.0);
        assert!(e.amps_plus().iter().skip(1).all(|z| z.norm() == 0.0));
        assert!(e.amps_minus().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn exact_sector_overlap_with_ground_state() {
        // <0|D(kappa)|0> = e^{-kappa^2/2}
        let kappa = 0.1;
        let s = evolve_exact(&params(kappa, 0.0), 32).unwrap();
        // z+ sector = amps_plus + amps_minus, carrying weight 1/2
        let z_plus: Array1<num_complex::Complex64> = s
            .amps_plus()
            .iter()
            .zip(s.amps_minus().iter())
            .map(|(p, m)| p + m)
            .collect();
        let overlap = z_plus[0].re; // <0| component, real by construction
        assert_abs_diff_eq!(overlap, (-kappa * kappa / 2.0).exp(), epsilon = 1e-14);
    }

    #[test]
    fn exact_evolution_is_unitary() {
        for kappa in [0.05, 0.1, 0.2, 0.3] {
            let s = evolve_exact(&params(kappa, 0.0), 32).unwrap();
            assert_abs_diff_eq!(s.norm_sq(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn exact_matches_first_order_for_small_kappa() {
        for kappa in [0.01, 0.03, 0.05] {
            let e = evolve_exact(&params(kappa, 0.0), 32).unwrap();
            let f = evolve_first_order(&params(kappa, 0.0), 32).unwrap();
            let mut diff_sq = 0.0;
            for n in 0..32 {
                diff_sq += (e.amps_plus()[n] - f.amps_plus()[n]).norm_sqr();
                diff_sq += (e.amps_minus()[n] - f.amps_minus()[n]).norm_sqr();
            }
            assert!(
                diff_sq.sqrt() <= kappa * kappa,
                "kappa={kappa}: ||exact - first_order|| = {} > kappa^2",
                diff_sq.sqrt()
            );
        }
    }

    #[test]
    fn tiny_dim_trips_leakage_guard() {
        assert!(matches!(
            evolve_exact(&params(0.2, 0.0), 4),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn post_select_first_order_probabilities() {
        let (kappa, phi) = (0.01, 0.1);
        let s = evolve_first_order(&params(kappa, phi), 16).unwrap();
        let sel = post_select(&s, phi).unwrap();
        // leading order: phi^2 + kappa^2
        assert_abs_diff_eq!(sel.prob_leading, phi * phi + kappa * kappa, epsilon = 1e-16);
        // exact: all normalization factors kept
        let exact = (phi * phi + kappa * kappa)
            / ((1.0 + phi * phi) * (1.0 + kappa * kappa));
        assert_abs_diff_eq!(sel.prob, exact, epsilon = 1e-16);
    }

    #[test]
    fn dark_port_pointer_is_first_excited_state() {
        let s = evolve_first_order(&params(0.02, 0.0), 16).unwrap();
        let sel = post_select(&s, 0.0).unwrap();
        assert_abs_diff_eq!(sel.pointer.amps()[1].re, 1.0, epsilon = 1e-15);
        assert_eq!(conditional_pdf(&sel.pointer, 0.0), 0.0);
    }

    #[test]
    fn post_select_with_nothing_to_project_fails() {
        let s = evolve_first_order(&params(0.0, 0.0), 16).unwrap();
        assert!(matches!(
            post_select(&s, 0.0),
            Err(Error::ImpossiblePostSelection)
        ));
    }

    #[test]
    fn conditional_mean_matches_closed_form() {
        let (kappa, phi) = (0.01, 0.1);
        let s = evolve_first_order(&params(kappa, phi), 16).unwrap();
        let sel = post_select(&s, phi).unwrap();
        let mean = mean_position(&sel.pointer).unwrap();
        let expected = 2.0_f64.sqrt() * kappa * phi / (phi * phi + kappa * kappa);
        assert_abs_diff_eq!(mean, expected, epsilon = 1e-12);
    }

    #[test]
    fn weak_value_is_inverse_phi() {
        assert_abs_diff_eq!(weak_value(0.1).unwrap(), 10.0, epsilon = 1e-15);
        assert_abs_diff_eq!(weak_value(1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(weak_value(0.0).is_err());
    }

    #[test]
    fn displacement_over_coupling_approaches_weak_value() {
        // mean / (sqrt(2) w kappa) -> 1/phi as kappa/phi -> 0
        let phi = 0.1;
        let w = 1.0;
        let mut prev_gap = f64::INFINITY;
        for kappa in [1e-3, 1e-4, 1e-5] {
            let s = evolve_first_order(&params(kappa, phi), 16).unwrap();
            let sel = post_select(&s, phi).unwrap();
            let ratio = mean_position(&sel.pointer).unwrap() / (2.0_f64.sqrt() * w * kappa);
            let gap = (ratio - weak_value(phi).unwrap()).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-6);
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(&params(0.01, 0.1)), Regime::WeakValue);
        assert_eq!(classify_regime(&params(0.05, 0.0)), Regime::DarkPort);
        assert_eq!(classify_regime(&params(0.01, 0.5)), Regime::BrightPort);
        assert_eq!(classify_regime(&params(0.05, 0.1)), Regime::Invalid);
        // boundaries
        assert_eq!(classify_regime(&params(0.04, 0.2)), Regime::WeakValue);
        assert_eq!(classify_regime(&params(0.1, 0.1)), Regime::DarkPort);
    }

    #[test]
    fn conditional_pdf_values() {
        let g = crate::pointer_fock::ground_state(8, 1.0).unwrap();
        assert_abs_diff_eq!(
            conditional_pdf(&g, 0.0),
            1.0 / std::f64::consts::PI.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn conditional_pdf_integrates_to_one() {
        let (kappa, phi) = (0.01, 0.1);
        let s = evolve_first_order(&params(kappa, phi), 16).unwrap();
        let sel = post_select(&s, phi).unwrap();
        let grid: PositionGrid<f64> = PositionGrid::standard(1.0, 0.0, 0.0);
        let total = grid.integrate(|x| conditional_pdf(&sel.pointer, x));
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn pdf_peak_sits_at_amplified_displacement() {
        // kappa/phi = 0.05: argmax within 2% of sqrt(2) w kappa / phi
        let (kappa, phi) = (0.005, 0.1);
        let s = evolve_first_order(&params(kappa, phi), 16).unwrap();
        let sel = post_select(&s, phi).unwrap();
        let d = 2.0_f64.sqrt() * kappa / phi;
        let grid: PositionGrid<f64> = PositionGrid::standard(1.0, 0.0, d);
        let (mut best_x, mut best_p) = (0.0, -1.0);
        for x in grid.nodes() {
            let p = conditional_pdf(&sel.pointer, x);
            if p > best_p {
                best_p = p;
                best_x = x;
            }
        }
        assert!(
            (best_x - d).abs() <= 0.02 * d + grid.step(),
            "argmax {best_x} vs displacement {d}"
        );
    }

    #[test]
    fn dark_port_pdf_is_even_with_node_at_origin() {
        let s = evolve_exact(&params(0.05, 0.0), 32).unwrap();
        let sel = post_select(&s, 0.0).unwrap();
        assert!(conditional_pdf(&sel.pointer, 0.0) < 1e-12);
        let grid: PositionGrid<f64> = PositionGrid::standard(1.0, 0.0, 0.0);
        for i in (0..grid.len()).step_by(1024) {
            let x = grid.node(i);
            let diff =
                (conditional_pdf(&sel.pointer, x) - conditional_pdf(&sel.pointer, -x)).abs();
            assert!(diff < 1e-12);
        }
        let nearest = grid.node(grid.nearest(0.0));
        assert!(conditional_pdf(&sel.pointer, nearest) < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn post_selection_probability_is_monotone(
            kappa1 in 0.0..0.4f64,
            dk in 0.001..0.4f64,
            phi1 in 0.0..0.4f64,
            dp in 0.001..0.4f64,
        ) {
            let base = post_select(
                &evolve_exact(&params(kappa1, 0.0), 32).unwrap(), phi1).unwrap().prob;
            let more_kappa = post_select(
                &evolve_exact(&params(kappa1 + dk, 0.0), 32).unwrap(), phi1).unwrap().prob;
            let more_phi = post_select(
                &evolve_exact(&params(kappa1, 0.0), 32).unwrap(), phi1 + dp).unwrap().prob;
            proptest::prop_assert!(more_kappa >= base - 1e-14);
            proptest::prop_assert!(more_phi >= base - 1e-14);
        }
    }

    #[test]
    fn mean_displacement_is_positive_for_positive_parameters() {
        // pins the sign convention: sigma_z = +1 displaces X in +direction
        let s = evolve_exact(&params(0.05, 0.0), 32).unwrap();
        let sel = post_select(&s, 0.1).unwrap();
        assert!(mean_position(&sel.pointer).unwrap() > 0.0);
    }
}
