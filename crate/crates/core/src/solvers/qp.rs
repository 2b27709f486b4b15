//! Solvers for the stochastic quadratic problem
//! `min E ½ (x − ξ)ᵀ Q (x − ξ)` over a box.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::grad_qp;
use crate::linalg::SymMatrix;
use crate::oracle::{Access, PairOutcome, QpRound};
use crate::rng::TrialStreams;
use crate::sampling::{sphere_sample, RadialDensity};
use crate::scalar::{Interval, Real};

use super::record::project_box;
use super::schedule::{StagePlan, StepSchedule};

/// Quadratic instance with `ξ ~ N(mean, sd² I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem<T> {
    pub q: SymMatrix<T>,
    pub mean: Vec<T>,
    pub sd: T,
    pub bounds: Vec<Interval<T>>,
    /// Smallest eigenvalue of Q.
    pub mu: T,
    /// Largest eigenvalue of Q.
    pub lip: T,
}

impl<T: Real> QpProblem<T> {
    pub fn new(q: SymMatrix<T>, mean: Vec<T>, sd: T, bounds: Vec<Interval<T>>) -> Result<Self> {
        let d = q.dim();
        if mean.len() != d || bounds.len() != d {
            return Err(Error::InvalidParameter("mean and box must match the dimension of Q".into()));
        }
        if !(sd > T::zero()) {
            return Err(Error::InvalidParameter(format!("standard deviation must be positive, got {sd}")));
        }
        let (mu, lip) = q.extreme_eigenvalues()?;
        Ok(Self { q, mean, sd, bounds, mu, lip })
    }

    /// `Q = Q'ᵀQ'/d + I` with standard normal `Q'`, `ξ ~ N(center·1, sd² I)`
    /// and the box `[lo, hi]^d`.
    pub fn random<R: Rng + ?Sized>(d: usize, center: T, sd: T, lo: T, hi: T, rng: &mut R) -> Result<Self> {
        let a: Vec<T> = (0..d * d).map(|_| T::std_normal(rng)).collect();
        let q = SymMatrix::gram_plus_identity(&a, d)?;
        Self::new(q, vec![center; d], sd, vec![Interval::new(lo, hi); d])
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn sample_xi<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.mean.iter().map(|m| *m + self.sd * T::std_normal(rng)).collect()
    }

    /// `c = √d·λ_min/λ_max`; radial exponential rates below it keep the
    /// estimator's second moment finite.
    pub fn radial_rate_limit(&self) -> T {
        T::from_usize_lossy(self.dim()).sqrt() * self.mu / self.lip
    }

    /// `H(x) = ½ (x − m)ᵀ Q (x − m) + ½ sd² tr Q`.
    pub fn h(&self, x: &[T]) -> T {
        let diff: Vec<T> = x.iter().zip(&self.mean).map(|(a, b)| *a - *b).collect();
        let trace: T = (0..self.dim()).map(|i| self.q.get(i, i)).sum();
        T::c(0.5) * (self.q.quad_form(&diff) + self.sd * self.sd * trace)
    }

    /// Minimum of H; requires the mean to lie in the box.
    pub fn hstar(&self) -> Result<T> {
        if self.mean.iter().zip(&self.bounds).any(|(m, b)| !b.contains(*m)) {
            return Err(Error::InvalidParameter("mean of ξ must lie in the feasible box".into()));
        }
        Ok(self.h(&self.mean))
    }

    pub fn relative_gap(&self, x: &[T]) -> Result<T> {
        let hs = self.hstar()?;
        if hs == T::zero() {
            return Err(Error::GapUndefined);
        }
        Ok((self.h(x) - hs) / hs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpConfig<T> {
    pub x1: Vec<T>,
    pub horizon: usize,
    pub schedule: StepSchedule<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpRunRecord<T> {
    pub iterates: Vec<Vec<T>>,
    pub averages: Vec<Vec<T>>,
    pub output: Vec<T>,
    pub comparisons: u64,
    pub revealed: u64,
    pub gaps: Option<Vec<T>>,
    pub elapsed: Duration,
}

impl<T: Real> QpRunRecord<T> {
    fn new(n: usize) -> Self {
        Self {
            iterates: Vec::with_capacity(n),
            averages: Vec::with_capacity(n),
            output: Vec::new(),
            comparisons: 0,
            revealed: 0,
            gaps: None,
            elapsed: Duration::ZERO,
        }
    }

    fn fill_gaps(&mut self, prob: &QpProblem<T>, with_gaps: bool) -> Result<()> {
        if with_gaps {
            self.gaps = Some(self.averages.iter().map(|a| prob.relative_gap(a)).collect::<Result<Vec<_>>>()?);
        }
        Ok(())
    }
}

fn check_start<T: Real>(prob: &QpProblem<T>, x1: &[T], horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    if x1.len() != prob.dim() || x1.iter().zip(&prob.bounds).any(|(x, b)| !b.contains(*x)) {
        return Err(Error::InvalidParameter("x1 must be a feasible point of matching dimension".into()));
    }
    Ok(())
}

fn drive_stage_qp<T: Real>(
    rec: &mut QpRunRecord<T>,
    x1: &[T],
    len: usize,
    schedule: &StepSchedule<T>,
    bounds: &[Interval<T>],
    mut grad: impl FnMut(&[T]) -> Result<Vec<T>>,
) -> Result<Vec<T>> {
    let mut x = x1.to_vec();
    let mut sum = vec![T::zero(); x.len()];
    let mut avg = x.clone();
    for t in 1..=len {
        rec.iterates.push(x.clone());
        let tt = T::from_usize_lossy(t);
        for (i, v) in x.iter().enumerate() {
            sum[i] += *v;
            avg[i] = sum[i] / tt;
        }
        rec.averages.push(avg.clone());
        let eta = schedule.step_size(t);
        let g = grad(&x)?;
        let stepped: Vec<T> = x.iter().zip(&g).map(|(a, b)| *a - eta * *b).collect();
        x = project_box(&stepped, bounds);
    }
    Ok(avg)
}

fn qp_grad<T: Real>(
    prob: &QpProblem<T>,
    radial: &RadialDensity<T>,
    x: &[T],
    streams: &mut TrialStreams,
    comparisons: &mut u64,
) -> Result<Vec<T>> {
    let xi = prob.sample_xi(&mut streams.oracle);
    let mut round = QpRound::new(xi, &prob.q, 2, Access::ComparisonOnly);
    let u: Vec<T> = sphere_sample(prob.dim(), &mut streams.aux);
    let z = radial.draw(&mut streams.aux);
    let pair = round.qp_compare_pair(x, &u, z)?;
    let sign = match pair {
        PairOutcome::PlusSmaller => T::one(),
        PairOutcome::MinusSmallerOrEqual => -T::one(),
    };
    let winner: Vec<T> = x.iter().zip(&u).map(|(a, b)| *a + sign * z * *b).collect();
    let le = round.qp_compare_winner_vs_center(&winner, x)?;
    *comparisons += 2;
    Ok(grad_qp(&u, z, pair, le, &prob.q, radial)?.value)
}

/// CBA for the quadratic problem.
pub fn run_cba_qp<T: Real>(
    cfg: &QpConfig<T>,
    prob: &QpProblem<T>,
    radial: &RadialDensity<T>,
    with_gaps: bool,
    streams: &mut TrialStreams,
) -> Result<QpRunRecord<T>> {
    check_start(prob, &cfg.x1, cfg.horizon)?;
    cfg.schedule.validate()?;
    let started = Instant::now();
    let mut rec = QpRunRecord::new(cfg.horizon);
    let mut comparisons = 0;
    rec.output = drive_stage_qp(&mut rec, &cfg.x1, cfg.horizon, &cfg.schedule, &prob.bounds, |x| {
        qp_grad(prob, radial, x, streams, &mut comparisons)
    })?;
    rec.comparisons = comparisons;
    rec.fill_gaps(prob, with_gaps)?;
    rec.elapsed = started.elapsed();
    Ok(rec)
}

/// Restarted CBA for the quadratic problem.
pub fn run_mcba_qp<T: Real>(
    x1: &[T],
    plan: &StagePlan<T>,
    prob: &QpProblem<T>,
    radial: &RadialDensity<T>,
    with_gaps: bool,
    streams: &mut TrialStreams,
) -> Result<QpRunRecord<T>> {
    check_start(prob, x1, plan.total())?;
    let started = Instant::now();
    let mut rec = QpRunRecord::new(plan.total());
    let mut comparisons = 0;
    let mut xhat = x1.to_vec();
    for (len, schedule) in &plan.stages {
        schedule.validate()?;
        xhat = drive_stage_qp(&mut rec, &xhat, *len, schedule, &prob.bounds, |x| {
            qp_grad(prob, radial, x, streams, &mut comparisons)
        })?;
    }
    rec.output = xhat;
    rec.comparisons = comparisons;
    rec.fill_gaps(prob, with_gaps)?;
    rec.elapsed = started.elapsed();
    Ok(rec)
}

/// Full-information projected SGD with gradient `Q(x − ξ)`.
pub fn run_sgd_qp<T: Real>(
    cfg: &QpConfig<T>,
    prob: &QpProblem<T>,
    with_gaps: bool,
    streams: &mut TrialStreams,
) -> Result<QpRunRecord<T>> {
    check_start(prob, &cfg.x1, cfg.horizon)?;
    cfg.schedule.validate()?;
    let started = Instant::now();
    let mut rec = QpRunRecord::new(cfg.horizon);
    let mut revealed = 0;
    rec.output = drive_stage_qp(&mut rec, &cfg.x1, cfg.horizon, &cfg.schedule, &prob.bounds, |x| {
        let xi = prob.sample_xi(&mut streams.oracle);
        let mut round = QpRound::new(xi, &prob.q, 0, Access::BaselineAllowed);
        let xi = round.reveal_for_baseline()?;
        revealed += 1;
        let diff: Vec<T> = x.iter().zip(xi).map(|(a, b)| *a - *b).collect();
        Ok(prob.q.mul_vec(&diff))
    })?;
    rec.revealed = revealed;
    rec.fill_gaps(prob, with_gaps)?;
    rec.elapsed = started.elapsed();
    Ok(rec)
}
