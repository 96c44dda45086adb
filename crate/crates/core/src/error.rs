use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("recurrence breakdown: A_{n} vanished")]
    RecurrenceBreakdown { n: usize },

    #[error("parameterization mismatch: {which} = {direct} from the atom but {converted} from (delta, eta)")]
    ConventionMismatch {
        which: &'static str,
        direct: f64,
        converted: f64,
    },

    #[error("termination polynomial has complex roots: {0:?}")]
    ComplexRoots(Vec<(f64, f64)>),

    #[error("series does not terminate at degree {expected} for g = {g}")]
    NotTerminated { expected: usize, g: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("integration did not converge: {0}")]
    NonConvergence(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
