use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size {n}: need at least {min} sites")]
    InvalidSize { n: usize, min: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("graph generation failed after {restarts} restarts")]
    GenerationFailure { restarts: usize },

    #[error("row {row} of the kernel sums to {sum}, expected 1")]
    NotStochastic { row: usize, sum: f64 },

    #[error("kernel has nonzero trace: q({site},{site}) = {value}")]
    ZeroTrace { site: usize, value: f64 },

    #[error("kernel is not irreducible: site {site} is unreachable")]
    Irreducibility { site: usize },

    #[error("kernel is not reversible at ({x},{y}): residual {residual:e}")]
    DetailedBalance { x: usize, y: usize, residual: f64 },

    #[error("stationary distribution did not converge within {iterations} iterations")]
    StationaryDivergence { iterations: usize },

    #[error(
        "selection strength w = {w} outside [0, w_max] with w_max = (2 + 2 max|payoff|)^-1 = {max}"
    )]
    SelectionOutOfRange { w: f64, max: f64 },

    #[error("expansion singularity: 1 - w A(x) = {value} at site {site}")]
    ExpansionSingularity { site: usize, value: f64 },

    #[error("absorption stop requires zero mutation rates (mu1 = {mu1}, mu0 = {mu0})")]
    InvalidStop { mu1: f64, mu0: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("weights are degenerate: {0}")]
    DegenerateWeights(String),

    #[error("linear system is singular or did not converge: {0}")]
    Singular(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
