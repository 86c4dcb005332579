use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain on which a function is defined or supported.
    #[error("{func}: domain error: {msg}")]
    Domain { func: &'static str, msg: String },

    /// A series or quadrature failed to reach the requested tolerance.
    /// `partial` carries the best value obtained before giving up.
    #[error("{func}: precision target not met ({detail}); partial value {partial:e}")]
    Precision {
        func: &'static str,
        detail: String,
        partial: f64,
    },

    /// E[g_d^{-1/2}] is infinite when the desired-link cluster parameter is at most 0.5.
    #[error("EVM diverges: desired-link mu = {mu} must be greater than 0.5")]
    Divergence { mu: f64 },

    #[error("unsupported scenario: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn precision(func: &'static str, detail: impl Into<String>, partial: f64) -> Self {
        Error::Precision {
            func,
            detail: detail.into(),
            partial,
        }
    }
}
