use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("tagged particle left the safe ring window (|X| = {displacement} > L/4 = {limit}); results would be contaminated by periodicity")]
    RingBreach { displacement: i64, limit: i64 },

    #[error("tagged particle tracking is not enabled for this state")]
    TaggedDisabled,

    #[error("bond ({0},{1}) is not tracked; enable full bond tracking before time 0")]
    UntrackedBond(i64, i64),

    #[error("test function support [{lo}, {hi}] exceeds the ring window (-{win}, {win})")]
    SupportExceedsWindow { lo: f64, hi: f64, win: f64 },

    #[error("rescaled-field normalisation must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("hypergeometric argument {0} outside supported domain z < 1")]
    HypergeomDomain(f64),

    #[error("hypergeometric series did not converge within {0} terms")]
    HypergeomNonConvergence(usize),

    #[error("kernel arguments require 0 < s < t, got t = {t}, s = {s}")]
    KernelDomain { t: f64, s: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("covariance matrix is singular ({0}); the requested quadratic form is undefined in this degenerate regime")]
    SingularMatrix(String),

    #[error("degenerate density rho = {0}: chi(rho) = 0")]
    DegenerateDensity(f64),

    #[error("degenerate sub-critical variance: rho = 1/2 makes the drift coefficient vanish")]
    DegenerateSubVariance,

    #[error("grid error: {0}")]
    Grid(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
