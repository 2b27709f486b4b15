//! Comparison-based stochastic optimization.
//!
//! Minimizes `H(x) = E h(x, ξ)` when the only access to the random sample
//! `ξ` is a comparison with chosen points: "is ξ above or below x?". The
//! gradient estimators importance-weight a second random comparison so
//! their expectation equals `H'(x)`.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod linalg;
pub mod oracle;
pub mod problems;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::{Interval, Real};

pub type Objective = problems::Objective1D<f64>;
pub type Distribution = problems::DistributionSpec<f64>;
pub type GroundTruth = problems::GroundTruth<f64>;
pub type Band = sampling::Band<f64>;
pub type BandFamily = sampling::BandFamily<f64>;
pub type RadialDensity = sampling::RadialDensity<f64>;
pub type CategoricalScheme = oracle::CategoricalScheme<f64>;
pub type StepSchedule = solvers::StepSchedule<f64>;
pub type StagePlan = solvers::StagePlan<f64>;
pub type SolverConfig = solvers::SolverConfig<f64>;
pub type RunRecord = solvers::RunRecord<f64>;
pub type QpProblem = solvers::QpProblem<f64>;
pub type QpConfig = solvers::QpConfig<f64>;
pub type QpRunRecord = solvers::QpRunRecord<f64>;
pub type SymMatrix = linalg::SymMatrix<f64>;
