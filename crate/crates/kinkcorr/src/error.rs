use thiserror::Error;

/// Errors raised by the numerical core and the front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("value out of range: {0}")]
    Range(String),

    /// The requested tolerance was not reached. `estimate` is the best value
    /// available and `bound` its estimated absolute error.
    #[error("precision loss: estimate {estimate:e} with error bound {bound:e}")]
    PrecisionLoss { estimate: f64, bound: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("configuration error at line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
