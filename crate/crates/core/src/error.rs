use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A multiplier's support radius is too close to the grid's Nyquist radius.
    #[error("Nyquist guard: symbol radius R = {radius} exceeds {limit} (0.9 x Nyquist radius {nyquist})")]
    Nyquist {
        radius: f64,
        limit: f64,
        nyquist: f64,
    },

    /// Exponents violate the admissibility constraints of the Lp -> Lr estimate.
    #[error("inadmissible exponents: {0}")]
    Inadmissible(String),

    #[error("empty interval: {0}")]
    EmptyInterval(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("malformed grid function file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
