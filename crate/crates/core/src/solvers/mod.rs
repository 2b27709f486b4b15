//! CBA, its restarted, categorical and quadratic variants, and the SGD
//! baseline.

pub mod nonconvex;
pub mod qp;
pub mod record;
pub mod scalar;
pub mod schedule;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use nonconvex::{
    moreau_point, moreau_stationarity, random_index_output, random_index_probabilities, MoreauParams, MoreauPoint,
};
pub use qp::{run_cba_qp, run_mcba_qp, run_sgd_qp, QpConfig, QpProblem, QpRunRecord};
pub use record::{project_box, project_interval, OutputMode, RunRecord};
pub use scalar::{run_cba, run_cba_c, run_mcba, run_sgd, SolverConfig};
pub use schedule::{StagePlan, StageVariant, StepSchedule};

/// Algorithm selectors accepted in experiment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// CBA with `η_t = 1/√t`.
    Cba,
    /// CBA with `η_t = 1/(μt)`.
    CbaStc,
    Mcba,
    /// Categorical CBA with `m` bands.
    CbaC { bands: usize },
    CbaQp,
    McbaQp,
    /// SGD with `η_t = 1/√t` (or the CBA-QP law on quadratic panels).
    Sgd,
    /// SGD with `η_t = 1/(μt)`.
    SgdStc,
}

impl Algorithm {
    pub fn is_qp(&self) -> bool {
        matches!(self, Algorithm::CbaQp | Algorithm::McbaQp)
    }

    pub fn is_baseline(&self) -> bool {
        matches!(self, Algorithm::Sgd | Algorithm::SgdStc)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Cba => write!(f, "cba"),
            Algorithm::CbaStc => write!(f, "cbastc"),
            Algorithm::Mcba => write!(f, "mcba"),
            Algorithm::CbaC { bands } => write!(f, "cba-c:{bands}"),
            Algorithm::CbaQp => write!(f, "cba-qp"),
            Algorithm::McbaQp => write!(f, "mcba-qp"),
            Algorithm::Sgd => write!(f, "sgd"),
            Algorithm::SgdStc => write!(f, "sgdstc"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let err = |reason: &str| Error::Parse { kind: "algorithm", id: s.to_string(), reason: reason.to_string() };
        Ok(match s.trim() {
            "cba" => Algorithm::Cba,
            "cbastc" => Algorithm::CbaStc,
            "mcba" => Algorithm::Mcba,
            "cba-qp" => Algorithm::CbaQp,
            "mcba-qp" => Algorithm::McbaQp,
            "sgd" => Algorithm::Sgd,
            "sgdstc" => Algorithm::SgdStc,
            other => {
                let m = other.strip_prefix("cba-c:").ok_or_else(|| err("unknown algorithm"))?;
                let bands: usize = m.trim().parse().map_err(|_| err("band count must be a positive integer"))?;
                if bands == 0 {
                    return Err(err("band count must be a positive integer"));
                }
                Algorithm::CbaC { bands }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_roundtrip() {
        for id in ["cba", "cbastc", "mcba", "cba-c:3", "cba-c:5", "cba-qp", "mcba-qp", "sgd", "sgdstc"] {
            let a: Algorithm = id.parse().unwrap();
            assert_eq!(a.to_string(), id);
        }
        assert!("cba-c:0".parse::<Algorithm>().is_err());
        assert!("adam".parse::<Algorithm>().is_err());
    }

    #[test]
    fn projections() {
        assert_eq!(project_interval(200.0, 50.0, 150.0), 150.0);
        assert_eq!(project_interval(100.0, 50.0, 150.0), 100.0);
        let b = [crate::scalar::Interval::new(50.0, 150.0); 2];
        assert_eq!(project_box(&[40.0, 160.0], &b), vec![50.0, 150.0]);
    }
}
