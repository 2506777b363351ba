//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angular frequency must be positive (got {0} rad/s)")]
    NonPositiveFrequency(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency {f_hz} Hz is at or below the waveguide cutoff {cutoff_hz} Hz")]
    BelowCutoff { f_hz: f64, cutoff_hz: f64 },

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("grid too coarse for derivatives (need at least 3 points, got {0})")]
    GridTooCoarse(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("patterns are defined on different angle grids")]
    GridMismatch,

    #[error("zero-norm input")]
    ZeroNorm,

    #[error("no beam: pattern is identically zero")]
    NoBeam,

    #[error("depletion coupling must lie in [0, 1) (got {0})")]
    InvalidDepletion(f64),

    #[error("exhaustive search refused for {0} elements (limit is 24)")]
    TooManyElements(usize),

    #[error("matrix is numerically rank-deficient (sigma_min/sigma_1 = {ratio:e}); use lambda > 0")]
    RankDeficient { ratio: f64 },

    #[error("hologram code has no active elements")]
    AllOffCode,

    #[error("invalid hologram code: {0}")]
    InvalidCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
