use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("entry ({i}, {j}) = {value} lies outside [0, 1]")]
    OutOfUnitInterval { i: usize, j: usize, value: f64 },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("vertex {vertex} has zero degree")]
    ZeroDegree { vertex: usize },

    #[error("singular system in resistance inversion (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("resistance matrix is not realizable (round-trip residual {residual:e})")]
    NotRealizable { residual: f64 },

    #[error("n = {n} is too large for exhaustive search (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("no feasible candidate: all {skipped} candidates were disconnected")]
    NoFeasibleCandidate { skipped: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("{0}")]
    Undefined(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
