use thiserror::Error;

/// Errors raised by the numerical kernels and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("beam kind mismatch: expected {expected} beam, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    /// The Coulomb kernel denominator `F - G cos y` touches zero.
    #[error("singular kernel: F = {f}, G = {g}")]
    SingularKernel { f: f64, g: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
