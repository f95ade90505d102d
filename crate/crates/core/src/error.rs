use thiserror::Error;

/// Errors raised by the evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series could not reach the requested tolerance within the work ceiling.
    #[error("series did not converge: best error estimate {estimate:e} exceeds tolerance {tol:e} after {work} coefficient evaluations")]
    NonConvergence { estimate: f64, tol: f64, work: u64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature failed: error estimate {estimate:e} exceeds tolerance {tol:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        tol: f64,
        subdivisions: usize,
    },

    /// A structural precondition on an input specification was violated.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Two routes to the same quantity disagreed.
    #[error("sides disagree: {lhs} vs {rhs}")]
    Mismatch { lhs: f64, rhs: f64 },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
