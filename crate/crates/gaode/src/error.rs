use thiserror::Error;

/// Errors surfaced by configuration and the harness.
#[derive(Debug, Error)]
pub enum GaodeError {
    #[error("population size {0} is too small: rand/1 needs at least 4 individuals")]
    PopulationTooSmall(usize),

    #[error("dimension {0} is too small: benchmark functions require D >= 2")]
    DimensionTooSmall(usize),

    #[error("unknown method token `{0}` (expected jde|epsde|jade|mde|shade|gao)")]
    UnknownMethod(String),

    #[error(
        "unknown function token `{0}` (expected sphere|ellipsoid|rot-ellipsoid|rosenbrock|ackley|rastrigin)"
    )]
    UnknownFunction(String),

    #[error("unknown oracle preset `{0}` (expected gaode00|gaode04|composite)")]
    UnknownPreset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("failed to parse config: {0}")]
    ConfigParse(String),

    #[error("no run records to aggregate")]
    EmptyRecords,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GaodeError>;
