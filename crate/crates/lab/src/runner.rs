//! Parallel execution of independent trials.
//!
//! Each trial owns its random streams, so results depend only on the seed.
//! Trials run in blocks on a worker pool and their gap series are folded
//! into the aggregates in trial order.

use std::time::Duration;

use cbopt::rng::{tag, RngContract, StreamId, TrialStreams};
use cbopt::solvers::{
    run_cba, run_cba_c, run_cba_qp, run_mcba, run_mcba_qp, run_sgd, run_sgd_qp, Algorithm, QpConfig, QpProblem,
    SolverConfig, StagePlan, StageVariant, StepSchedule,
};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{LabError, LabResult};
use crate::spec::{ExperimentSpec, Panel, Problem, Series};
use crate::stats::{SeriesAccumulator, SeriesStats};

/// Trials per scheduling block; bounds memory held for aggregation.
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { threads: std::thread::available_parallelism().map_or(1, |n| n.get()) }
    }
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub label: String,
    pub stats: SeriesStats,
    pub requested: usize,
    pub aborted: usize,
    pub first_error: Option<String>,
    /// Solver time summed over trials.
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub series: Vec<SeriesResult>,
    pub threads: usize,
}

impl ExperimentResult {
    pub fn series(&self, label: &str) -> Option<&SeriesResult> {
        self.series.iter().find(|s| s.label == label)
    }
}

type TrialOutcome = Result<(Vec<f64>, Duration), String>;

/// Runs every series of every panel for `spec.trials` trials.
pub fn run_experiment(spec: &ExperimentSpec, opts: RunOptions) -> LabResult<ExperimentResult> {
    let panels = spec.resolve()?;
    let threads = opts.threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| LabError::Pool(e.to_string()))?;
    let contract = RngContract::new(spec.seed);
    let mut results = Vec::new();
    for (pi, panel) in panels.iter().enumerate() {
        let qp = match panel.problem {
            Problem::Qp { d, center, sd, lo, hi } => {
                let mut rng = contract.stream(StreamId::new(pi as u32, tag::PROBLEM));
                Some(QpProblem::random(d, center, sd, lo, hi, &mut rng)?)
            }
            Problem::Scalar { .. } => None,
        };
        let mut accs: Vec<SeriesAccumulator> = panel.series.iter().map(|_| SeriesAccumulator::new(spec.iters)).collect();
        let mut tallies: Vec<(usize, Option<String>, Duration)> = vec![(0, None, Duration::ZERO); panel.series.len()];
        let mut start = 0;
        while start < spec.trials {
            let end = (start + BLOCK).min(spec.trials);
            let block: Vec<Vec<TrialOutcome>> = pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|trial| run_trial(panel, qp.as_ref(), spec.iters, &contract, trial as u32))
                    .collect()
            });
            for outcomes in block {
                for (si, outcome) in outcomes.into_iter().enumerate() {
                    match outcome {
                        Ok((gaps, elapsed)) => {
                            accs[si].push(&gaps);
                            tallies[si].2 += elapsed;
                        }
                        Err(e) => {
                            tallies[si].0 += 1;
                            tallies[si].1.get_or_insert(e);
                        }
                    }
                }
            }
            start = end;
        }
        for ((series, acc), (aborted, first_error, wall)) in panel.series.iter().zip(accs).zip(tallies) {
            if aborted * 100 > spec.trials || aborted == spec.trials {
                return Err(LabError::TooManyAborts {
                    series: series.label.clone(),
                    aborted,
                    requested: spec.trials,
                    first: first_error.unwrap_or_default(),
                });
            }
            results.push(SeriesResult {
                label: series.label.clone(),
                stats: acc.finish(),
                requested: spec.trials,
                aborted,
                first_error,
                wall,
            });
        }
    }
    Ok(ExperimentResult { spec: spec.clone(), series: results, threads })
}

fn run_trial(panel: &Panel, qp: Option<&QpProblem<f64>>, iters: usize, contract: &RngContract, trial: u32) -> Vec<TrialOutcome> {
    let mut init = contract.stream(StreamId::new(trial, tag::INIT));
    match (&panel.problem, qp) {
        (Problem::Scalar { obj, .. }, _) => {
            let x1 = obj.bounds.lo + (obj.bounds.hi - obj.bounds.lo) * init.random::<f64>();
            panel.series.iter().map(|s| scalar_run(panel, s, x1, iters, contract, trial)).collect()
        }
        (Problem::Qp { .. }, Some(prob)) => {
            let x1: Vec<f64> = prob.bounds.iter().map(|b| b.lo + (b.hi - b.lo) * init.random::<f64>()).collect();
            panel.series.iter().map(|s| qp_run(prob, s, &x1, iters, contract, trial)).collect()
        }
        (Problem::Qp { .. }, None) => unreachable!("quadratic panels are built before their trials"),
    }
}

fn scalar_run(panel: &Panel, s: &Series, x1: f64, iters: usize, contract: &RngContract, trial: u32) -> TrialOutcome {
    let Problem::Scalar { obj, dist, gt, mu } = &panel.problem else { unreachable!() };
    let mut streams = TrialStreams::new(contract, trial, s.stream);
    let cfg = |schedule| SolverConfig::new(x1, iters, schedule).with_batch(s.batch);
    let gt = Some(gt);
    let band = || s.band.as_ref().expect("resolved scalar series carry a band");
    let rec = match s.algorithm {
        Algorithm::Cba => run_cba(&cfg(StepSchedule::InvSqrtT), dist, obj, band(), gt, &mut streams),
        Algorithm::CbaStc => run_cba(&cfg(StepSchedule::Strong { mu: *mu }), dist, obj, band(), gt, &mut streams),
        Algorithm::Mcba => StagePlan::covering(StageVariant::A, iters, *mu, 0.0)
            .and_then(|plan| run_mcba(x1, &plan, s.batch, dist, obj, band(), gt, &mut streams)),
        Algorithm::CbaC { .. } => {
            let scheme = s.scheme.as_ref().expect("resolved categorical series carry a scheme");
            run_cba_c(&cfg(StepSchedule::InvSqrtT), dist, obj, scheme, gt, &mut streams)
        }
        Algorithm::Sgd => run_sgd(&cfg(StepSchedule::InvSqrtT), dist, obj, gt, &mut streams),
        Algorithm::SgdStc => run_sgd(&cfg(StepSchedule::Strong { mu: *mu }), dist, obj, gt, &mut streams),
        Algorithm::CbaQp | Algorithm::McbaQp => unreachable!("rejected at resolution"),
    };
    rec.map(|r| (r.gaps.expect("ground truth supplied"), r.elapsed)).map_err(|e| e.to_string())
}

fn qp_run(prob: &QpProblem<f64>, s: &Series, x1: &[f64], iters: usize, contract: &RngContract, trial: u32) -> TrialOutcome {
    let mut streams = TrialStreams::new(contract, trial, s.stream);
    let smooth = StepSchedule::StrongSmooth { mu: prob.mu, lip: prob.lip };
    let cfg = QpConfig { x1: x1.to_vec(), horizon: iters, schedule: smooth };
    let radial = || s.radial.as_ref().expect("resolved quadratic series carry a radial density");
    let rec = match s.algorithm {
        Algorithm::CbaQp => run_cba_qp(&cfg, prob, radial(), true, &mut streams),
        Algorithm::McbaQp => StagePlan::covering(StageVariant::B, iters, prob.mu, prob.lip)
            .and_then(|plan| run_mcba_qp(x1, &plan, prob, radial(), true, &mut streams)),
        Algorithm::Sgd => run_sgd_qp(&cfg, prob, true, &mut streams),
        _ => unreachable!("rejected at resolution"),
    };
    rec.map(|r| (r.gaps.expect("gaps requested"), r.elapsed)).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    fn small(name: &str, trials: usize, iters: usize) -> ExperimentSpec {
        let mut s = preset(name).unwrap();
        s.trials = trials;
        s.iters = iters;
        s
    }

    #[test]
    fn one_trial_zero_stderr() {
        let r = run_experiment(&small("fig1b", 1, 50), RunOptions { threads: 1 }).unwrap();
        assert_eq!(r.series.len(), 5);
        for s in &r.series {
            assert_eq!(s.stats.trials, 1);
            assert!(s.stats.stderr.iter().all(|v| *v == 0.0));
            assert_eq!(s.stats.len(), 50);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = small("fig1c", 70, 40);
        let a = run_experiment(&spec, RunOptions { threads: 1 }).unwrap();
        let b = run_experiment(&spec, RunOptions { threads: 3 }).unwrap();
        for (x, y) in a.series.iter().zip(&b.series) {
            assert_eq!(x.stats, y.stats);
        }
    }

    #[test]
    fn qp_panels_run() {
        let mut spec = small("fig5", 3, 60);
        spec.panels.truncate(1);
        let r = run_experiment(&spec, RunOptions { threads: 1 }).unwrap();
        let labels: Vec<&str> = r.series.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["d=5/sgd", "d=5/cba-qp", "d=5/mcba-qp"]);
        assert!(r.series.iter().all(|s| s.stats.mean.iter().all(|v| v.is_finite() && *v >= 0.0)));
    }

    #[test]
    fn adding_a_series_leaves_others_unchanged() {
        let base = small("fig1a", 4, 30);
        let mut more = base.clone();
        more.panels[0].series.insert(0, crate::spec::SeriesSpec::new("cba-c:3"));
        let a = run_experiment(&base, RunOptions { threads: 1 }).unwrap();
        let b = run_experiment(&more, RunOptions { threads: 1 }).unwrap();
        assert_eq!(a.series("cba").unwrap().stats, b.series("cba").unwrap().stats);
    }
}
