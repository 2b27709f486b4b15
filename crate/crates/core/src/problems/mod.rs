//! Objectives, laws of the hidden sample and exact reference values.

pub mod constants;
pub mod distribution;
pub mod ground_truth;
pub mod objective;

pub use constants::AssumptionConstants;
pub use distribution::{DistributionKind, DistributionSpec, HiddenLaw, PartialMoments, UniformComponent};
pub use ground_truth::{by_quadrature, ground_truth, GroundTruth, GroundTruthMethod};
pub use objective::{default_bounds, NewsvendorParams, Objective1D, ObjectiveKind, Side};
