use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the admissible range of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// The diameter proviso `D < l_delta` (required when K < 0 and N <= 0) is violated.
    #[error("proviso violation: D = {d} must be strictly less than l_delta = {l_delta} when K < 0 and N <= 0")]
    Proviso { d: f64, l_delta: f64 },

    /// The parameter range is excluded by the method, not by the theory.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    /// A numerical solve failed to converge or bracket.
    #[error("solver error: {0}")]
    Solver(String),

    /// Two grids that must coincide do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Malformed input data (CSV, config, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
