//! Simulator and estimation harness for post-selected weak measurements in
//! the Fock-state picture.
//!
//! The crate is organized around four layers:
//!
//! - [`pointer_fock`]: truncated-Fock-space pointer states, ladder
//!   operators and position-space wavefunctions;
//! - [`weak_protocol`]: the qubit (x) pointer protocol: interaction,
//!   post-selection, displacement observables and regime classification;
//! - [`ensemble`]: the photon + atomic-ensemble realization on the Dicke
//!   subspace, with a full product-space oracle in [`brute_force`];
//! - [`estimation`]: a deterministic Monte Carlo harness comparing
//!   weak-value, dark-port and bright-port strategies under background
//!   noise.
//!
//! Everything is generic over the scalar type through [`real::Real`]
//! (`f32` or `f64`); the `*64` aliases below pin the double-precision
//! instantiations that the CLI and the acceptance suite use.

pub mod brute_force;
pub mod ensemble;
pub mod error;
pub mod estimation;
pub mod grid;
pub mod linalg;
pub mod pointer_fock;
pub mod real;
pub mod weak_protocol;

pub use error::{Error, Result};
pub use real::Real;

/// Double-precision pointer state.
pub type PointerState64 = pointer_fock::PointerState<f64>;
/// Double-precision Fock-space operator.
pub type FockOperator64 = pointer_fock::FockOperator<f64>;
/// Double-precision position grid.
pub type PositionGrid64 = grid::PositionGrid<f64>;
/// Double-precision joint system-pointer state.
pub type JointState64 = weak_protocol::JointState<f64>;
/// Double-precision protocol parameters.
pub type ProtocolParams64 = weak_protocol::ProtocolParams<f64>;
/// Double-precision Dicke-subspace state.
pub type DickeState64 = ensemble::DickeState<f64>;
/// Double-precision collective spin operators.
pub type CollectiveSpinOps64 = ensemble::CollectiveSpinOps<f64>;
/// Double-precision photon + ensemble joint state.
pub type PhotonEnsembleState64 = ensemble::PhotonEnsembleState<f64>;
/// Double-precision homodyne outcome distribution.
pub type HomodyneDistribution64 = ensemble::HomodyneDistribution<f64>;
/// Double-precision trial record.
pub type TrialRecord64 = estimation::TrialRecord<f64>;
/// Double-precision estimator summary.
pub type SummaryStats64 = estimation::SummaryStats<f64>;
