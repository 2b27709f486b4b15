use std::time::Duration;

use crate::error::Result;
use crate::problems::GroundTruth;
use crate::scalar::{Interval, Real};

use super::schedule::StepSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    /// `x̄_T`.
    Average,
    /// `x_{t*}` with `P(t* = t) ∝ η_t`.
    RandomIndex,
}

/// Trajectory of a one-dimensional run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<T> {
    /// `x_1, …, x_T` (the final update `x_{T+1}` is not part of the output).
    pub iterates: Vec<T>,
    /// Running averages reported at each iteration; for restarted methods
    /// the average restarts with every stage.
    pub averages: Vec<T>,
    /// Step size used at each iteration.
    pub steps: Vec<T>,
    pub output: T,
    pub comparisons: u64,
    pub revealed: u64,
    pub gaps: Option<Vec<T>>,
    pub elapsed: Duration,
}

impl<T: Real> RunRecord<T> {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            iterates: Vec::with_capacity(n),
            averages: Vec::with_capacity(n),
            steps: Vec::with_capacity(n),
            output: T::zero(),
            comparisons: 0,
            revealed: 0,
            gaps: None,
            elapsed: Duration::ZERO,
        }
    }

    pub(crate) fn fill_gaps(&mut self, gt: Option<&GroundTruth<T>>) -> Result<()> {
        if let Some(gt) = gt {
            let gaps = self.averages.iter().map(|x| gt.relative_gap(*x)).collect::<Result<Vec<_>>>()?;
            self.gaps = Some(gaps);
        }
        Ok(())
    }
}

pub fn project_interval<T: Real>(v: T, lo: T, hi: T) -> T {
    v.max(lo).min(hi)
}

pub fn project_box<T: Real>(v: &[T], bounds: &[Interval<T>]) -> Vec<T> {
    v.iter().zip(bounds).map(|(x, b)| project_interval(*x, b.lo, b.hi)).collect()
}

/// Runs `len` projected steps from `x1`, averaging from the stage start.
/// `grad` returns the gradient estimate at the current iterate.
pub(crate) fn drive_stage<T: Real>(
    rec: &mut RunRecord<T>,
    x1: T,
    len: usize,
    schedule: &StepSchedule<T>,
    bounds: Interval<T>,
    mut grad: impl FnMut(T) -> Result<T>,
) -> Result<T> {
    let mut x = x1;
    let mut sum = T::zero();
    let mut avg = x1;
    for t in 1..=len {
        rec.iterates.push(x);
        sum += x;
        avg = sum / T::from_usize_lossy(t);
        rec.averages.push(avg);
        let eta = schedule.step_size(t);
        rec.steps.push(eta);
        let g = grad(x)?;
        x = project_interval(x - eta * g, bounds.lo, bounds.hi);
    }
    Ok(avg)
}
