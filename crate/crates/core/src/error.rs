use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("operation not admitted in this regime: {0}")]
    Regime(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("angular modes differ ({0} vs {1})")]
    ModeMismatch(i64, i64),
    #[error("lambda lies within {distance:.3e} of the Dirichlet eigenvalue {eigenvalue}")]
    SpectralCollision { eigenvalue: f64, distance: f64 },
    #[error("Krein denominator {modulus:.3e} too small on mode {mode}")]
    KreinCollision { mode: i64, modulus: f64 },
    #[error("form is infinite on this input: {0}")]
    InfiniteForm(String),
    #[error("iteration failed to converge: {0}")]
    Convergence(String),
}
