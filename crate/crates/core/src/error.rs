use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid jump set: {0}")]
    InvalidJumpSet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative altitude at step {index}")]
    NegativeAltitude { index: usize },

    #[error("illegal catastrophe at step {index} from altitude {altitude}")]
    IllegalCatastrophe { index: usize, altitude: usize },

    #[error("jump at step {index} is not in the jump set")]
    UnknownJump { index: usize },

    #[error("empty support")]
    EmptySupport,

    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    #[error("length {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("series has a zero constant term and cannot be inverted")]
    NonInvertible,

    #[error("cannot split kernel roots into small and large ones at z = {z}")]
    ClassificationAmbiguous { z: f64 },

    #[error("root finding failed: {0}")]
    RootFindFailure(String),

    #[error("M(z) has a pole at or before z = {z}")]
    PoleAtZ { z: f64 },

    #[error("jump set has period {period}; singularity analysis at rho needs an aperiodic support")]
    PeriodicUnsupported { period: u64 },

    #[error("extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),

    #[error("regime unavailable: {0}")]
    RegimeUnavailable(String),

    #[error("derivative unstable: {0}")]
    DerivativeUnstable(String),

    #[error("non-positive variance {value}")]
    DegenerateVariance { value: f64 },

    #[error("tail mass {tail:e} exceeds target {target:e}; increase K")]
    TailBoundExceeded { tail: f64, target: f64 },

    #[error("path is not an excursion")]
    NotAnExcursion,

    #[error("unsupported jump set: {0}")]
    UnsupportedJumpSet(String),

    #[error("invalid 1-horizontal path at step {index}")]
    InvalidHPath { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
