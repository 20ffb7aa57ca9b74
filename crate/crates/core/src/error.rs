use thiserror::Error;

/// Errors reported by the library. Parameter validation happens at
/// construction time wherever a type exists to carry the invariant, so most
/// numeric kernels are infallible once their inputs are built.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Input outside the mathematical domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested operation needs a copula density, but the family is
    /// singular (the Frechet-Hoeffding bounds concentrate on a curve).
    #[error("copula family has no density")]
    NoDensity,
    #[error("quadrature did not reach the requested tolerance: {0}")]
    QuadratureFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
