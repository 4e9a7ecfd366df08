use thiserror::Error;

/// Errors raised by the representation builders and the orbit checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported algebra family `{0}`")]
    UnsupportedFamily(String),
    #[error("{family}({n}) is not a valid algebra: {reason}")]
    BadParameter {
        family: String,
        n: usize,
        reason: String,
    },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("degree {degree} exceeds module dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector has no projective class")]
    ZeroProjectivePoint,
    #[error("orbit criteria disagree: omega residual {omega:e}, central defect {defect:e}")]
    InconsistentCriteria { omega: f64, defect: f64 },
    #[error("orbit is not Lagrangian")]
    NotLagrangian,
    #[error("isolation criteria disagree: moduli dimension {moduli}, semisimple part transitive = {ss_transitive}")]
    IsolationDisagreement { moduli: usize, ss_transitive: bool },
    #[error("invariant form is not definite on the acting algebra (representation not faithful)")]
    IndefiniteGram,
    #[error("circle does not centralize the group: commutator norm {0:e}")]
    CircleNotCentral(f64),
    #[error("point is off the level set: |psi - lambda| = {0:e}")]
    OffLevel(f64),
    #[error("circle generator lies in the isotropy algebra; the circle does not act almost freely")]
    CircleInIsotropy,
    #[error("line coordinate is zero (exceptional divisor); not supported")]
    ExceptionalDivisor,
    #[error("weights k = s = {0} give ordinary projective space; use the projective check")]
    EqualWeights(u32),
    #[error("table row `{0}` is not supported")]
    UnsupportedRow(String),
    #[error("unknown table row `{0}`")]
    UnknownRow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
