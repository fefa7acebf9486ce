use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its domain (non-positive volatility, zero buckets, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Input data cannot support the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// No volatility in the search bracket reproduces the price.
    #[error("no implied volatility for price {price} (admissible range {lower}..{upper})")]
    NoImpliedVol { price: f64, lower: f64, upper: f64 },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive, got {value}")))
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite, got {value}")))
    }
}

impl Error {
    /// Process exit code: 2 bad arguments, 3 bad input data, 4 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::InvalidParameter { .. } => 2,
            Error::InsufficientData(_) | Error::DegenerateData(_) | Error::Parse { .. } | Error::Io(_) => 3,
            Error::NoImpliedVol { .. } | Error::NoConvergence(_) => 4,
        }
    }
}
