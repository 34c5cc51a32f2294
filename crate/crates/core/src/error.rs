use thiserror::Error;

/// Errors raised by the test statistics, simulators and calculators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a function (e.g. an unbounded quantile at 0 or 1).
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument violates a precondition (shape, ordering, range).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The input data cannot be used (empty, NaN, ragged).
    #[error("invalid input: {0}")]
    Input(String),
    /// A column (or the series) has zero score variance, so standardization is undefined.
    #[error("degenerate data: column {column} is constant")]
    Degenerate { column: usize },
    /// A score has zero variance under a theoretical margin.
    #[error("degenerate margin: {0}")]
    ZeroVariance(String),
    /// A numerical routine did not reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A power-study cell failed while simulating or testing.
    #[error("power study cell {cell}: {message}")]
    Study { cell: String, message: String },
    /// A power-study configuration could not be parsed or validated.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
