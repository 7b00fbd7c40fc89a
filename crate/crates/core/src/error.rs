//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series grids differ: (start {left_start}, dt {left_dt}) vs (start {right_start}, dt {right_dt})")]
    GridMismatch {
        left_start: f64,
        left_dt: f64,
        right_start: f64,
        right_dt: f64,
    },

    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("window [{lo}, {hi}] out of range for series of length {len}")]
    WindowOutOfRange { lo: usize, hi: usize, len: usize },

    #[error("empty integration window [{lo}, {hi}]")]
    EmptyWindow { lo: usize, hi: usize },

    #[error("series too short: need at least {needed} samples, have {len}")]
    SeriesTooShort { needed: usize, len: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{name} = {value} is not a positive integer multiple of dt = {dt}")]
    NonIntegerStepRatio {
        name: &'static str,
        value: f64,
        dt: f64,
    },

    #[error("negative control input u = {value}")]
    NegativeControl { value: f64 },

    #[error("non-finite {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("horizon path length {path} does not match issued-control history length {controls}")]
    HorizonMismatch { controls: usize, path: usize },

    #[error("every sample falls inside the warm-up window; no metrics can be computed")]
    AllWarmup,

    #[error("gain sweep requires at least one gain")]
    EmptyGainList,

    #[error("unknown scenario id '{id}'")]
    UnknownScenario { id: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("scenario {id}: {source}")]
    Scenario {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps an error with the id of the scenario that produced it.
    pub fn in_scenario(self, id: &str) -> Error {
        Error::Scenario {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}
