use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    /// A quadrature or iteration failed to settle.
    #[error("no convergence: {0}")]
    NonConvergence(&'static str),
    /// A computation produced a non-finite or inconsistent value.
    #[error("numeric failure: {0}")]
    Numeric(&'static str),
    /// Array arguments have incompatible lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
