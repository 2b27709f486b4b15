use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {kind} id {id:?}: {reason}")]
    Parse {
        kind: &'static str,
        id: String,
        reason: String,
    },

    #[error("comparison budget exhausted for this round")]
    BudgetExceeded,

    #[error("hidden sample tied with the query point {attempts} times in a row; distribution looks degenerate")]
    DegenerateDistribution { attempts: u32 },

    #[error("the hidden sample of a comparison-only round cannot be revealed")]
    AccessViolation,

    #[error("cross partial is undefined at z = x = {x}")]
    CrossAtKink { x: f64 },

    #[error("optimal sampling density is undefined (zero or non-finite total weight)")]
    OptimalDensityUndefined,

    #[error("sampling density vanishes at the drawn point z = {z}")]
    DensityInconsistency { z: f64 },

    #[error("relative gap undefined because H(x*) = 0")]
    GapUndefined,

    #[error("quadrature did not reach tolerance {tol:e} on [{lo}, {hi}]")]
    QuadratureFailed { lo: f64, hi: f64, tol: f64 },

    #[error("matrix is not symmetric positive definite (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("sampling density does not lie on the side indicated by the first comparison")]
    SideMismatch,
}
