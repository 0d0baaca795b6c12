use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient stations: {0}")]
    InsufficientStations(String),
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("no interfering station and no thermal noise: SINR is undefined")]
    NoInterference,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty sample set")]
    EmptySample,
    #[error("degenerate fit: all path-loss exponents are equal")]
    DegenerateFit,
    #[error("zero variance in correlation input")]
    ZeroVariance,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Configuration problems are reported separately from runtime failures
    /// by the command-line front end.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
