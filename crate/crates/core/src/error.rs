use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("eps ratio must be positive, got {0}")]
    NonPositiveEps(String),
    #[error("not a scalar in units of pi: {0:?}")]
    BadScalar(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("malformed interval [{lo}, {hi}): lo must be below hi")]
    MalformedInterval { lo: String, hi: String },
    #[error("interval sets carry different eps bindings")]
    BindingMismatch,
    #[error("endpoint {0} mentions eps but no eps ratio is bound")]
    UnboundEps(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("n must be a positive integer")]
    InvalidN,
    #[error("eps = {eps}·π exceeds delta = {delta}·π")]
    EpsOutOfRange { eps: String, delta: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimensionError {
    #[error("set accumulates at zero")]
    AccumulationAtZero,
    #[error("support [{lo}, {hi}) is outside the required interval [{req_lo}, {req_hi})")]
    SupportOutOfRange {
        lo: String,
        hi: String,
        req_lo: String,
        req_hi: String,
    },
    #[error("dyadic fold multiplicity is not constant near zero; no finite profile exists")]
    NonStationaryAtZero,
    #[error("the sum rule is undefined at xi = 0")]
    ZeroInput,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported document version {0}, expected 1")]
    Version(u64),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
