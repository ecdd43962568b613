use thiserror::Error;

/// Errors raised by the numerical kernels and the channel models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument outside domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported Meijer G parameter class: {0}")]
    UnsupportedClass(String),

    #[error("truncated Bessel series used outside its validity region: x = {x} but 2k = {two_k}")]
    OutsideValidity { x: f64, two_k: f64 },

    #[error("{what} did not converge: {diagnostics}")]
    NonConvergent {
        what: &'static str,
        diagnostics: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
