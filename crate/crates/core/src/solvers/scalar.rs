//! One-dimensional solvers.

use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{grad_cba_categorical, minibatch_grad, sample_cba_gradient};
use crate::oracle::{Access, CategoricalScheme, Round};
use crate::problems::{DistributionSpec, GroundTruth, Objective1D};
use crate::rng::TrialStreams;
use crate::sampling::{BandFamily, SideDensity};
use crate::scalar::Real;

use super::nonconvex::random_index_output;
use super::record::{drive_stage, OutputMode, RunRecord};
use super::schedule::{StagePlan, StepSchedule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub x1: T,
    pub horizon: usize,
    pub schedule: StepSchedule<T>,
    /// Second points compared per round.
    pub batch: usize,
    pub output: OutputMode,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(x1: T, horizon: usize, schedule: StepSchedule<T>) -> Self {
        Self { x1, horizon, schedule, batch: 1, output: OutputMode::Average }
    }

    pub fn with_batch(mut self, batch: usize) -> Self {
        self.batch = batch;
        self
    }

    pub fn with_output(mut self, output: OutputMode) -> Self {
        self.output = output;
        self
    }

    fn validate(&self, obj: &Objective1D<T>) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.batch == 0 {
            return Err(Error::InvalidParameter("mini-batch size must be at least 1".into()));
        }
        if !obj.bounds.contains(self.x1) {
            return Err(Error::InvalidParameter(format!("x1 = {} is infeasible", self.x1)));
        }
        self.schedule.validate()
    }
}

fn finish<T: Real, R: Rng + ?Sized>(
    rec: &mut RunRecord<T>,
    avg: T,
    mode: OutputMode,
    gt: Option<&GroundTruth<T>>,
    rng: &mut R,
    started: Instant,
) -> Result<()> {
    rec.output = match mode {
        OutputMode::Average => avg,
        OutputMode::RandomIndex => random_index_output(rec, rng)?.1,
    };
    rec.fill_gaps(gt)?;
    rec.elapsed = started.elapsed();
    Ok(())
}

struct CbaStep<'a, T> {
    dist: &'a DistributionSpec<T>,
    obj: &'a Objective1D<T>,
    family: &'a BandFamily<T>,
    batch: usize,
}

impl<T: Real> CbaStep<'_, T> {
    fn grad(&self, x: T, streams: &mut TrialStreams, comparisons: &mut u64) -> Result<T> {
        if self.batch == 1 {
            *comparisons += 2;
            let make = |side| self.family.make(self.dist, self.obj, x, side);
            return Ok(sample_cba_gradient(x, self.dist, self.obj, make, &mut streams.oracle, &mut streams.aux)?.value);
        }
        let budget = 1 + self.batch as u32;
        let mut round = Round::begin(self.dist, x, budget, Access::ComparisonOnly, &mut streams.oracle)?;
        let first = round.compare(x)?;
        let band = self.family.make(self.dist, self.obj, x, first.side())?;
        let mut probes = Vec::with_capacity(self.batch);
        for _ in 0..self.batch {
            let z = band.draw(&mut streams.aux);
            probes.push((z, round.compare(z)?));
        }
        let g = minibatch_grad(x, first, &probes, self.obj, &band)?;
        *comparisons += budget as u64;
        debug_assert!(!round.revealed());
        Ok(g)
    }
}

/// Comparison-based algorithm with binary answers.
pub fn run_cba<T: Real>(
    cfg: &SolverConfig<T>,
    dist: &DistributionSpec<T>,
    obj: &Objective1D<T>,
    family: &BandFamily<T>,
    gt: Option<&GroundTruth<T>>,
    streams: &mut TrialStreams,
) -> Result<RunRecord<T>> {
    cfg.validate(obj)?;
    family.validate_for(obj)?;
    let started = Instant::now();
    let step = CbaStep { dist, obj, family, batch: cfg.batch };
    let mut rec = RunRecord::with_capacity(cfg.horizon);
    let mut comparisons = 0;
    let avg = drive_stage(&mut rec, cfg.x1, cfg.horizon, &cfg.schedule, obj.bounds, |x| {
        step.grad(x, streams, &mut comparisons)
    })?;
    rec.comparisons = comparisons;
    finish(&mut rec, avg, cfg.output, gt, &mut streams.output, started)?;
    Ok(rec)
}

/// Restarted CBA: each stage starts from the previous stage's average.
/// The record's averages restart with every stage.
#[allow(clippy::too_many_arguments)]
pub fn run_mcba<T: Real>(
    x1: T,
    plan: &StagePlan<T>,
    batch: usize,
    dist: &DistributionSpec<T>,
    obj: &Objective1D<T>,
    family: &BandFamily<T>,
    gt: Option<&GroundTruth<T>>,
    streams: &mut TrialStreams,
) -> Result<RunRecord<T>> {
    let first_schedule = plan.stages.first().map(|s| s.1).ok_or_else(|| Error::InvalidParameter("empty stage plan".into()))?;
    SolverConfig { x1, horizon: plan.total(), schedule: first_schedule, batch, output: OutputMode::Average }
        .validate(obj)?;
    family.validate_for(obj)?;
    let started = Instant::now();
    let step = CbaStep { dist, obj, family, batch };
    let mut rec = RunRecord::with_capacity(plan.total());
    let mut comparisons = 0;
    let mut xhat = x1;
    for (len, schedule) in &plan.stages {
        xhat = drive_stage(&mut rec, xhat, *len, schedule, obj.bounds, |x| step.grad(x, streams, &mut comparisons))?;
    }
    rec.comparisons = comparisons;
    finish(&mut rec, xhat, OutputMode::Average, gt, &mut streams.output, started)?;
    Ok(rec)
}

/// CBA with categorical first answers.
pub fn run_cba_c<T: Real>(
    cfg: &SolverConfig<T>,
    dist: &DistributionSpec<T>,
    obj: &Objective1D<T>,
    scheme: &CategoricalScheme<T>,
    gt: Option<&GroundTruth<T>>,
    streams: &mut TrialStreams,
) -> Result<RunRecord<T>> {
    cfg.validate(obj)?;
    let started = Instant::now();
    let mut rec = RunRecord::with_capacity(cfg.horizon);
    let mut comparisons = 0u64;
    let batch = cfg.batch;
    let budget = 1 + batch as u32;
    let avg = drive_stage(&mut rec, cfg.x1, cfg.horizon, &cfg.schedule, obj.bounds, |x| {
        let mut round = Round::begin(dist, x, budget, Access::ComparisonOnly, &mut streams.oracle)?;
        let out = round.compare_categorical(x, scheme)?;
        let band = scheme.density(x, out)?;
        let mut acc = T::zero();
        for _ in 0..batch {
            let z = band.draw(&mut streams.aux);
            let second = round.compare(z)?;
            acc += grad_cba_categorical(x, out, z, second, obj, scheme)?.value;
        }
        comparisons += budget as u64;
        Ok(acc / T::from_usize_lossy(batch))
    })?;
    rec.comparisons = comparisons;
    finish(&mut rec, avg, cfg.output, gt, &mut streams.output, started)?;
    Ok(rec)
}

/// Full-information projected SGD on revealed samples.
pub fn run_sgd<T: Real>(
    cfg: &SolverConfig<T>,
    dist: &DistributionSpec<T>,
    obj: &Objective1D<T>,
    gt: Option<&GroundTruth<T>>,
    streams: &mut TrialStreams,
) -> Result<RunRecord<T>> {
    cfg.validate(obj)?;
    let started = Instant::now();
    let mut rec = RunRecord::with_capacity(cfg.horizon);
    let mut revealed = 0u64;
    let avg = drive_stage(&mut rec, cfg.x1, cfg.horizon, &cfg.schedule, obj.bounds, |x| {
        let mut round = Round::begin(dist, x, 0, Access::BaselineAllowed, &mut streams.oracle)?;
        let xi = round.reveal_for_baseline()?;
        revealed += 1;
        Ok(obj.partial_x(x, xi))
    })?;
    rec.revealed = revealed;
    finish(&mut rec, avg, cfg.output, gt, &mut streams.output, started)?;
    Ok(rec)
}
