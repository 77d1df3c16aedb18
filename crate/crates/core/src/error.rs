use thiserror::Error;

/// Errors raised by the state, channel and correlation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-physical correlation vector ({c1}, {c2}, {c3}): {reason}")]
    NonPhysical {
        c1: f64,
        c2: f64,
        c3: f64,
        reason: String,
    },
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("negative evolution time {0}")]
    NegativeTime(f64),
    #[error("decoherence rate must be positive and finite, got {0}")]
    BadRate(f64),
    #[error("integration step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("preserved coefficient must satisfy 0 < |kappa| < 1, got {0}")]
    BadKappa(f64),
    #[error("c3 = {0} outside the separable family range 0 < |c3| < sqrt(2) - 1")]
    OutOfRange(f64),
    #[error("state is not in the transition class of the {0} channel")]
    NotInClass(&'static str),
    #[error("dissonance undefined for a pure entangled state (largest population is 1)")]
    PureEntangled,
    #[error("invalid measurement angles theta = {theta}, phi = {phi}")]
    BadAngles { theta: f64, phi: f64 },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
