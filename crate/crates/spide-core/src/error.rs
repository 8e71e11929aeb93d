use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was handed an invalid parameter.
    #[error("configuration error: {field}: {msg}")]
    Config { field: &'static str, msg: String },

    /// Array sizes or grids do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// An API contract was violated (e.g. solving with unvalidated coefficients).
    #[error("contract error: {0}")]
    Contract(String),

    /// A quadrature or time-stepping routine lost accuracy or produced
    /// non-finite values.
    #[error("numeric failure ({context}): {msg}")]
    Numeric { context: String, msg: String },

    /// A user-supplied evaluator failed at a sample point.
    #[error("evaluation error at t={t}, point={point:?}: {msg}")]
    Eval { t: f64, point: Vec<f64>, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: &'static str, msg: impl Into<String>) -> Self {
        Error::Config { field, msg: msg.into() }
    }

    pub fn numeric(context: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Numeric { context: context.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
