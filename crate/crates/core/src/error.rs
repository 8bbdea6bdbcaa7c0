use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the engine, the zero finder and the certifiers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("intermediate magnitude overflow while evaluating at k = {k}; shrink the window")]
    Overflow { k: Complex64 },

    #[error("a zero lies too close to the contour after {retries} dilation retries")]
    ZeroOnContour { retries: usize },

    #[error("contour quadrature did not converge to an integer (got {value})")]
    QuadratureNotConverged { value: f64 },

    #[error("Newton refinement did not converge from {start}")]
    NonConvergedNewton { start: Complex64 },

    #[error("requested region is not covered by a complete spectrum window")]
    IncompleteCoverage,

    #[error("Jensen check: function vanishes at the center")]
    CenterIsZero,

    #[error("Jensen check: a zero lies on the integration circle")]
    ZeroOnCircle,

    #[error("series envelope tail cannot reach tolerance {tol} within {max_terms} terms")]
    EnvelopeNotReached { tol: f64, max_terms: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
