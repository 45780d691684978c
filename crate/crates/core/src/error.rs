use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// |rho| = 1: R equals ±1 almost surely and has no density.
    #[error("degenerate distribution: |rho| = 1, R = {rho} almost surely")]
    Degenerate { rho: f64 },

    /// The moment series did not reach the requested tolerance.
    #[error("series did not converge after {terms_used} terms (partial value {partial}, tail estimate {tail})")]
    Truncation { partial: f64, terms_used: usize, tail: f64 },

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// A tail bound can never be as small as the requested level.
    #[error("infeasible inversion: the bound cannot equal alpha = {alpha}")]
    Infeasible { alpha: f64 },

    /// One coordinate of the sample has zero variance.
    #[error("sample correlation undefined: zero sample variance")]
    UndefinedCorrelation,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
