use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("probability level {0} outside the admissible range {1}")]
    LevelOutOfRange(String, &'static str),

    #[error("mixture weight q = {0} leaves only one live component")]
    DegenerateWeight(String),

    #[error("mixed piecewise/parametric pair is not supported by {0}")]
    MixedPair(&'static str),

    #[error("no grid point reaches level {0}")]
    GridExhausted(String),

    #[error("no sampler for {0}")]
    NoSampler(String),

    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
