//! Self-check suites run by `cbopt verify`.

use std::fmt;

use cbopt::estimators::sample_cba_gradient;
use cbopt::oracle::{Access, BinaryOutcome, Round};
use cbopt::problems::{default_bounds, ground_truth, DistributionSpec, Objective1D, Side, UniformComponent};
use cbopt::quadrature::integrate_pieces;
use cbopt::rng::{RngContract, StreamId};
use cbopt::sampling::{Band, BandFamily, SideDensity};
use cbopt::solvers::{StagePlan, StageVariant, StepSchedule};
use cbopt::Interval;
use rand::Rng;

use crate::presets::preset;
use crate::runner::{run_experiment, RunOptions};
use crate::stats::Welford;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub quick: bool,
    pub seed: u64,
    pub threads: usize,
    /// Multiplies every sampling density; 1 for a genuine check, anything
    /// else injects a fault the suites must catch.
    pub pdf_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { quick: false, seed: 7, threads: RunOptions::default().threads, pdf_scale: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: String,
    pub tolerance: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<18} {}  samples: {}  tolerance: {}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.samples,
            self.tolerance
        )?;
        for d in &self.details {
            writeln!(f, "    {d}")?;
        }
        Ok(())
    }
}

/// A density whose reported pdf is off by a constant factor.
#[derive(Debug, Clone)]
pub struct ScaledDensity<D> {
    pub inner: D,
    pub scale: f64,
}

impl<D: SideDensity<f64>> SideDensity<f64> for ScaledDensity<D> {
    fn side(&self) -> Side {
        self.inner.side()
    }
    fn anchor(&self) -> f64 {
        self.inner.anchor()
    }
    fn pdf(&self, z: f64) -> f64 {
        self.scale * self.inner.pdf(z)
    }
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.inner.draw(rng)
    }
    fn support(&self) -> Interval<f64> {
        self.inner.support()
    }
}

pub fn run(opts: &VerifyOptions) -> Vec<SuiteReport> {
    vec![unbiasedness(opts), normalization(opts), indistinguishability(opts), schedules(), slopes(opts)]
}

fn laws() -> (DistributionSpec<f64>, DistributionSpec<f64>) {
    (DistributionSpec::uniform(50.0, 150.0).unwrap(), DistributionSpec::normal(100.0, 100.0).unwrap())
}

fn unbiasedness(opts: &VerifyOptions) -> SuiteReport {
    let n: u64 = if opts.quick { 200_000 } else { 1_000_000 };
    let (uni, nor) = laws();
    let exp = BandFamily::Exponential { rate: 0.0625 };
    let h1 = Objective1D::squared(default_bounds());
    let h2 = Objective1D::asymmetric(default_bounds());
    let cases = [
        ("h1 U[50,150] uniform x=120", h1, &uni, BandFamily::Uniform, 120.0),
        ("h1 N(100,100) exp x=110", h1, &nor, exp, 110.0),
        ("h2 U[50,150] uniform x=105", h2, &uni, BandFamily::Uniform, 105.0),
        ("h2 N(100,100) exp x=105", h2, &nor, exp, 105.0),
    ];
    let contract = RngContract::new(opts.seed);
    let mut passed = true;
    let mut details = Vec::new();
    for (i, (name, obj, dist, fam, x)) in cases.into_iter().enumerate() {
        let truth = ground_truth(&obj, dist).and_then(|gt| gt.hprime(x)).expect("built-in case");
        let mut oracle = contract.stream(StreamId::new(i as u32, 0));
        let mut aux = contract.stream(StreamId::new(i as u32, 1));
        let mut w = Welford::default();
        let mut failure = None;
        for _ in 0..n {
            let make = |side| fam.make(dist, &obj, x, side).map(|inner| ScaledDensity { inner, scale: opts.pdf_scale });
            match sample_cba_gradient(x, dist, &obj, make, &mut oracle, &mut aux) {
                Ok(g) => w.push(g.value),
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        let z = (w.mean - truth) / w.stderr();
        let ok = failure.is_none() && z.abs() <= 3.0;
        passed &= ok;
        details.push(match failure {
            Some(e) => format!("{name}: error {e}"),
            None => format!("{name}: mean {:.4} vs H' {truth:.4} ({z:+.2} stderr)", w.mean),
        });
    }
    SuiteReport { name: "unbiasedness", samples: format!("4 x {n}"), tolerance: "3 stderr".into(), passed, details }
}

fn normalization(opts: &VerifyOptions) -> SuiteReport {
    const TOL: f64 = 1e-6;
    let (uni, nor) = laws();
    let families = [BandFamily::Uniform, BandFamily::Exponential { rate: 0.0625 }, BandFamily::Optimal];
    let h1 = Objective1D::squared(default_bounds());
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut details = Vec::new();
    for (law_name, dist) in [("U[50,150]", &uni), ("N(100,100)", &nor)] {
        for fam in &families {
            for x in [55.0, 100.0, 145.0] {
                for side in [Side::Below, Side::Above] {
                    let band = match fam.make(dist, &h1, x, side) {
                        Ok(b) => b,
                        Err(e) => {
                            details.push(format!("{law_name} {fam} x={x} {side:?}: {e}"));
                            worst = f64::INFINITY;
                            continue;
                        }
                    };
                    let scaled = ScaledDensity { inner: band.clone(), scale: opts.pdf_scale };
                    let mass = total_mass(&scaled, &band);
                    count += 1;
                    let err = (mass - 1.0).abs();
                    if err > worst {
                        worst = err;
                    }
                    if err > TOL && details.len() < 5 {
                        details.push(format!("{law_name} {fam} x={x} {side:?}: mass {mass:.9}"));
                    }
                }
            }
        }
    }
    details.insert(0, format!("largest |mass - 1| = {worst:.2e}"));
    SuiteReport {
        name: "normalization",
        samples: format!("{count} densities"),
        tolerance: format!("{TOL:e}"),
        passed: worst <= TOL,
        details,
    }
}

fn total_mass(d: &impl SideDensity<f64>, band: &Band<f64>) -> f64 {
    let s = d.support();
    let (lo, hi, breaks) = match band {
        Band::Exponential { rate, origin, side: Side::Below, .. } => (origin - 60.0 / rate, *origin, vec![]),
        Band::Exponential { rate, origin, side: Side::Above, .. } => (*origin, origin + 60.0 / rate, vec![]),
        Band::Tabulated(t) => (s.lo, s.hi, t.grid().to_vec()),
        Band::Uniform { .. } => (s.lo, s.hi, vec![]),
    };
    integrate_pieces(|z| d.pdf(z), lo, hi, &breaks, 1e-10).unwrap_or(f64::NAN)
}

fn indistinguishability(opts: &VerifyOptions) -> SuiteReport {
    let n: u32 = if opts.quick { 20_000 } else { 100_000 };
    let part = |a, b| UniformComponent { weight: 0.5, a, b };
    let f1 = DistributionSpec::mixture(vec![part(-3.0, -2.0), part(2.0, 3.0)]).unwrap();
    let f2 = DistributionSpec::mixture(vec![part(-3.0, -2.0), part(3.0, 4.0)]).unwrap();
    let band = 3.0 * (0.25 / n as f64).sqrt();
    let contract = RngContract::new(opts.seed);
    let mut passed = true;
    let mut details = Vec::new();
    for (li, law) in [f1, f2].iter().enumerate() {
        let mut freqs = Vec::new();
        for (xi, x) in [-1.0, -0.5, 0.0, 0.5, 1.0].into_iter().enumerate() {
            let mut rng = contract.stream(StreamId::new(li as u32, xi as u32));
            let mut below = 0u32;
            for _ in 0..n {
                let mut r = Round::begin(law, x, 1, Access::ComparisonOnly, &mut rng).expect("non-degenerate law");
                if r.compare(x).expect("budget of one") == BinaryOutcome::SampleBelow {
                    below += 1;
                }
            }
            let f = below as f64 / n as f64;
            passed &= (f - 0.5).abs() <= band;
            freqs.push(format!("{f:.4}"));
        }
        details.push(format!("F{}: below-frequency at x = -1..1: {}", li + 1, freqs.join(", ")));
    }
    SuiteReport {
        name: "indistinguishable",
        samples: format!("10 x {n} rounds"),
        tolerance: format!("|freq - 0.5| <= {band:.4}"),
        passed,
        details,
    }
}

fn schedules() -> SuiteReport {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let a = StagePlan::new(StageVariant::A, 3, 1.0, 0.0).unwrap().total();
    let b = StagePlan::new(StageVariant::B, 2, 1.0, 1.0).unwrap().total();
    checks.push((format!("variant A, K=3: total {a} (want 112)"), a == 112));
    checks.push((format!("variant B, K=2: total {b} (want 56)"), b == 56));
    let cov: Vec<usize> = StagePlan::covering(StageVariant::A, 500, 0.5, 0.0).unwrap().stages.iter().map(|s| s.0).collect();
    checks.push((format!("500 iterations as stages {cov:?}"), cov == [16, 32, 64, 128, 256, 4]));
    let steps: [(StepSchedule<f64>, usize, f64); 4] = [
        (StepSchedule::InvSqrtT, 4, 0.5),
        (StepSchedule::Strong { mu: 0.5 }, 10, 0.2),
        (StepSchedule::StrongSmooth { mu: 1.0, lip: 3.0 }, 2, 0.2),
        (StepSchedule::Stage { k: 2, mu: 0.5 }, 7, 0.25),
    ];
    for (s, t, want) in steps {
        let got = s.step_size(t);
        checks.push((format!("{s:?} at t={t}: {got}"), (got - want).abs() <= 1e-15));
    }
    let passed = checks.iter().all(|c| c.1);
    SuiteReport {
        name: "schedules",
        samples: format!("{} closed forms", checks.len()),
        tolerance: "exact".into(),
        passed,
        details: checks.into_iter().filter(|c| !c.1).map(|c| format!("mismatch: {}", c.0)).collect(),
    }
}

fn slopes(opts: &VerifyOptions) -> SuiteReport {
    let trials = if opts.quick { 200 } else { 1000 };
    let mut spec = preset("fig1a").expect("built-in preset");
    spec.trials = trials;
    spec.seed = opts.seed;
    spec.panels[0].series.retain(|s| s.algorithm == "cba" || s.algorithm == "cbastc");
    let result = match run_experiment(&spec, RunOptions { threads: opts.threads }) {
        Ok(r) => r,
        Err(e) => {
            return SuiteReport {
                name: "slopes",
                samples: format!("{trials} trials"),
                tolerance: "-".into(),
                passed: false,
                details: vec![e.to_string()],
            }
        }
    };
    let mut passed = true;
    let mut details = Vec::new();
    for (label, lo, hi) in [("cbastc", -1.6, -0.5), ("cba", -1.2, -0.3)] {
        let slope = result.series(label).expect("series kept").stats.loglog_slope(50, 500);
        let ok = (lo..=hi).contains(&slope);
        passed &= ok;
        details.push(format!("{label}: slope {slope:.3} in [{lo}, {hi}]"));
    }
    SuiteReport {
        name: "slopes",
        samples: format!("fig1a, {trials} trials x 500 iterations"),
        tolerance: "slope bands".into(),
        passed,
        details,
    }
}
