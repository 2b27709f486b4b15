//! Step-size laws and restart stage plans.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule<T> {
    /// `1/√T`.
    ConstOverSqrtT { horizon: usize },
    /// `1/√t`.
    InvSqrtT,
    /// `1/(L + √T)`.
    SmoothConst { lip: T, horizon: usize },
    /// `1/(L + √t)`.
    SmoothDecay { lip: T },
    /// `1/(μt)`.
    Strong { mu: T },
    /// `1/(μt + L)`.
    StrongSmooth { mu: T, lip: T },
    /// `1/(2^{k+1}μ)`, constant within stage k.
    Stage { k: u32, mu: T },
    /// `1/(2^{k+1}μ + L)`.
    StageSmooth { k: u32, mu: T, lip: T },
}

impl<T: Real> StepSchedule<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: T, name: &str| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        let nonneg = |v: T, name: &str| {
            if v >= T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be nonnegative, got {v}")))
            }
        };
        match *self {
            StepSchedule::ConstOverSqrtT { horizon: 0 } => {
                Err(Error::InvalidParameter("horizon must be at least 1".into()))
            }
            StepSchedule::SmoothConst { horizon: 0, .. } => {
                Err(Error::InvalidParameter("horizon must be at least 1".into()))
            }
            StepSchedule::ConstOverSqrtT { .. } | StepSchedule::InvSqrtT => Ok(()),
            StepSchedule::SmoothConst { lip, .. } | StepSchedule::SmoothDecay { lip } => nonneg(lip, "L"),
            StepSchedule::Strong { mu } | StepSchedule::Stage { mu, .. } => pos(mu, "μ"),
            StepSchedule::StrongSmooth { mu, lip } | StepSchedule::StageSmooth { mu, lip, .. } => {
                pos(mu, "μ")?;
                nonneg(lip, "L")
            }
        }
    }

    /// η_t for `t ≥ 1`.
    pub fn step_size(&self, t: usize) -> T {
        debug_assert!(t >= 1);
        let tt = T::from_usize_lossy(t);
        match *self {
            StepSchedule::ConstOverSqrtT { horizon } => T::one() / T::from_usize_lossy(horizon).sqrt(),
            StepSchedule::InvSqrtT => T::one() / tt.sqrt(),
            StepSchedule::SmoothConst { lip, horizon } => T::one() / (lip + T::from_usize_lossy(horizon).sqrt()),
            StepSchedule::SmoothDecay { lip } => T::one() / (lip + tt.sqrt()),
            StepSchedule::Strong { mu } => T::one() / (mu * tt),
            StepSchedule::StrongSmooth { mu, lip } => T::one() / (mu * tt + lip),
            StepSchedule::Stage { k, mu } => T::one() / (T::c(2f64.powi(k as i32 + 1)) * mu),
            StepSchedule::StageSmooth { k, mu, lip } => T::one() / (T::c(2f64.powi(k as i32 + 1)) * mu + lip),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageVariant {
    /// `T_k = 2^{k+3}`, `η = 1/(2^{k+1}μ)`.
    A,
    /// `T_k = 2^{k+3} + 4`, `η = 1/(2^{k+1}μ + L)`.
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagePlan<T> {
    pub variant: StageVariant,
    pub stages: Vec<(usize, StepSchedule<T>)>,
}

impl<T: Real> StagePlan<T> {
    fn stage(variant: StageVariant, k: u32, mu: T, lip: T) -> (usize, StepSchedule<T>) {
        let base = 1usize << (k + 3);
        match variant {
            StageVariant::A => (base, StepSchedule::Stage { k, mu }),
            StageVariant::B => (base + 4, StepSchedule::StageSmooth { k, mu, lip }),
        }
    }

    /// Stages `k = 1..=stages`. `lip` is ignored by variant A.
    pub fn new(variant: StageVariant, stages: u32, mu: T, lip: T) -> Result<Self> {
        if stages == 0 || stages > 40 {
            return Err(Error::InvalidParameter(format!("stage count must be in 1..=40, got {stages}")));
        }
        let plan = Self { variant, stages: (1..=stages).map(|k| Self::stage(variant, k, mu, lip)).collect() };
        for (_, s) in &plan.stages {
            s.validate()?;
        }
        Ok(plan)
    }

    /// Just enough stages to reach `horizon` iterations, the last one cut
    /// short so the total is exactly `horizon`.
    pub fn covering(variant: StageVariant, horizon: usize, mu: T, lip: T) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        let mut stages = Vec::new();
        let mut total = 0;
        let mut k = 1;
        while total < horizon {
            let (len, s) = Self::stage(variant, k, mu, lip);
            s.validate()?;
            let len = len.min(horizon - total);
            stages.push((len, s));
            total += len;
            k += 1;
        }
        Ok(Self { variant, stages })
    }

    pub fn total(&self) -> usize {
        self.stages.iter().map(|(n, _)| n).sum()
    }
}
