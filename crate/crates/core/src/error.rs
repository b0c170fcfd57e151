use thiserror::Error;

/// Errors shared by all simulator modules.
///
/// Numeric payloads are carried as `f64` regardless of the scalar the
/// computation ran at; they are diagnostic only.
#[derive(Debug, Error)]
pub enum Error {
    /// Fock truncation below the smallest usable size.
    #[error("invalid dimension: fock dimension must be >= 2, got {dim}")]
    InvalidDimension { dim: usize },

    /// Atom count outside the supported Dicke-subspace range.
    #[error("invalid atom count: n_atoms must be in 1..={max}, got {n_atoms}")]
    InvalidAtomCount { n_atoms: usize, max: usize },

    /// A state that must be normalized is not.
    #[error("invalid state: norm deviates from 1 by {deviation:e} (limit {limit:e})")]
    NotNormalized { deviation: f64, limit: f64 },

    /// A parameter violates its documented range.
    #[error("invalid parameter: {name} must be {bound}, got {value}")]
    InvalidParameter {
        name: &'static str,
        bound: &'static str,
        value: f64,
    },

    /// A coupling or budget outside the validity window of the model used.
    #[error("out of regime: {name} = {value} exceeds limit {limit}")]
    OutOfRegime {
        name: &'static str,
        value: f64,
        limit: f64,
    },

    /// Probability weight escaped into the top of the truncated basis.
    #[error("truncation: leakage {leakage:e} into the top two Fock levels exceeds {limit:e}")]
    Truncation { leakage: f64, limit: f64 },

    /// Post-selection with probability indistinguishable from zero.
    #[error("impossible post-selection: projection probability is zero (phi = kappa = 0?)")]
    ImpossiblePostSelection,

    /// Photon detection with zero weight in every outcome.
    #[error("impossible detection: detection operator yields zero weight")]
    ImpossibleDetection,

    /// An estimator was asked to run on zero usable samples.
    #[error("insufficient data: no detections in the record stream")]
    InsufficientData,

    /// The brute-force oracle was asked for more atoms than it can hold.
    #[error("oracle scale: full product-space oracle supports n_atoms <= {max}, got {n_atoms}")]
    OracleScale { n_atoms: usize, max: usize },
}

impl Error {
    /// Stable machine-readable code for each variant (used by the CLI's
    /// JSON error objects).
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDimension { .. } => "invalid-dimension",
            Error::InvalidAtomCount { .. } => "invalid-atom-count",
            Error::NotNormalized { .. } => "invalid-state",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::OutOfRegime { .. } => "out-of-regime",
            Error::Truncation { .. } => "truncation",
            Error::ImpossiblePostSelection => "impossible-post-selection",
            Error::ImpossibleDetection => "impossible-detection",
            Error::InsufficientData => "insufficient-data",
            Error::OracleScale { .. } => "oracle-scale",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
