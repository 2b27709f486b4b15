//! Acceptance criteria 1–11, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the report is printed on every `cargo test`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cbopt::estimators::{grad_qp, sample_cba_gradient};
use cbopt::oracle::{Access, BinaryOutcome, PairOutcome, QpRound, Round};
use cbopt::problems::{
    by_quadrature, default_bounds, AssumptionConstants, DistributionSpec, Objective1D, UniformComponent,
};
use cbopt::rng::{tag, RngContract, StreamId, TrialStreams};
use cbopt::sampling::{sphere_sample, BandFamily, RadialDensity};
use cbopt::solvers::{
    moreau_point, moreau_stationarity, run_cba, MoreauParams, OutputMode, QpProblem,
    SolverConfig, StagePlan, StageVariant, StepSchedule,
};
use cbopt::Interval;
use cbopt_lab::presets::preset;
use cbopt_lab::spec::SeriesSpec;
use cbopt_lab::stats::Welford;
use cbopt_lab::{run_experiment, ExperimentSpec, RunOptions};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn threads() -> RunOptions {
    RunOptions::default()
}

fn c1_unbiasedness() -> Outcome {
    let n = 1_000_000;
    let uni = DistributionSpec::uniform(50.0, 150.0).unwrap();
    let nor = DistributionSpec::normal(100.0, 100.0).unwrap();
    let h1 = Objective1D::squared(default_bounds());
    let h2 = Objective1D::asymmetric(default_bounds());
    let exp = BandFamily::Exponential { rate: 0.0625 };
    let h2u = by_quadrature(&h2, &uni).unwrap().hprime(105.0).unwrap();
    let h2n = by_quadrature(&h2, &nor).unwrap().hprime(105.0).unwrap();
    let cases = [
        ("h1/U/uniform x=120", h1, &uni, BandFamily::Uniform, 120.0, 40.0),
        ("h1/N/exp x=110", h1, &nor, exp, 110.0, 20.0),
        ("h2/U/uniform x=105", h2, &uni, BandFamily::Uniform, 105.0, h2u),
        ("h2/N/exp x=105", h2, &nor, exp, 105.0, h2n),
    ];
    let contract = RngContract::new(101);
    let mut passed = true;
    let mut parts = Vec::new();
    for (i, (name, obj, dist, fam, x, truth)) in cases.into_iter().enumerate() {
        let started = Instant::now();
        let mut oracle = contract.stream(StreamId::new(i as u32, 0));
        let mut aux = contract.stream(StreamId::new(i as u32, 1));
        let mut w = Welford::default();
        for _ in 0..n {
            let g = sample_cba_gradient(x, dist, &obj, |side| fam.make(dist, &obj, x, side), &mut oracle, &mut aux).unwrap();
            w.push(g.value);
        }
        let z = (w.mean - truth) / w.stderr();
        let secs = started.elapsed().as_secs_f64();
        passed &= z.abs() <= 3.0 && secs <= 15.0;
        parts.push(format!("{name}: {z:+.2}se {secs:.1}s"));
    }
    outcome(passed, parts.join("; "))
}

fn c2_second_moment() -> Outcome {
    let dist = DistributionSpec::uniform(50.0, 150.0).unwrap();
    let obj = Objective1D::squared(default_bounds());
    let fam = BandFamily::Uniform;
    let g2 = AssumptionConstants::compute(&obj, &dist, &fam, 201).unwrap().g2;
    let contract = RngContract::new(102);
    let mut worst: f64 = 0.0;
    for (i, x) in [55.0, 100.0, 145.0].into_iter().enumerate() {
        let mut oracle = contract.stream(StreamId::new(i as u32, 0));
        let mut aux = contract.stream(StreamId::new(i as u32, 1));
        let mut acc = 0.0;
        let n = 1_000_000;
        for _ in 0..n {
            let g = sample_cba_gradient(x, &dist, &obj, |side| fam.make(&dist, &obj, x, side), &mut oracle, &mut aux).unwrap();
            acc += g.value * g.value;
        }
        worst = worst.max(acc / n as f64);
    }
    outcome(worst <= 1.05 * g2, format!("max E g^2 = {worst:.1} vs G^2 = {g2:.1} (ratio {:.3})", worst / g2))
}

fn c3_qp_unbiasedness() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for d in [1usize, 2, 5] {
        let contract = RngContract::new(103 + d as u64);
        let prob = QpProblem::random(d, 100.0, 50.0, 50.0, 150.0, &mut contract.stream(StreamId::new(0, tag::PROBLEM))).unwrap();
        let radial = RadialDensity::exponential(0.0625).unwrap();
        let mut aux = contract.stream(StreamId::new(0, 1));
        let xi: Vec<f64> = (0..d).map(|i| 92.0 + 4.0 * i as f64).collect();
        let x: Vec<f64> = (0..d).map(|i| 112.0 - 5.0 * i as f64).collect();
        let diff: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| a - b).collect();
        let truth = prob.q.mul_vec(&diff);
        let mut w = vec![Welford::default(); d];
        for _ in 0..1_000_000 {
            let mut round = QpRound::new(xi.clone(), &prob.q, 2, Access::ComparisonOnly);
            let u = sphere_sample(d, &mut aux);
            let z = radial.draw(&mut aux);
            let pair = round.qp_compare_pair(&x, &u, z).unwrap();
            let sign = if pair == PairOutcome::PlusSmaller { 1.0 } else { -1.0 };
            let winner: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + sign * z * b).collect();
            let le = round.qp_compare_winner_vs_center(&winner, &x).unwrap();
            let g = grad_qp(&u, z, pair, le, &prob.q, &radial).unwrap();
            for (acc, v) in w.iter_mut().zip(&g.value) {
                acc.push(*v);
            }
        }
        let worst = w.iter().zip(&truth).map(|(a, t)| ((a.mean - t) / a.stderr()).abs()).fold(0.0, f64::max);
        passed &= worst <= 3.0;
        parts.push(format!("d={d}: max {worst:.2}se"));
    }
    outcome(passed, parts.join("; "))
}

fn fig1a(trials: usize) -> ExperimentSpec {
    let mut s = preset("fig1a").unwrap();
    s.trials = trials;
    s.seed = 7;
    s
}

fn c4_convergence() -> Outcome {
    let r = run_experiment(&fig1a(200), threads()).unwrap();
    let cba = r.series("cbastc").unwrap().stats.at(500);
    let sgd = r.series("sgdstc").unwrap().stats.at(125);
    outcome(cba <= sgd, format!("delta_500(CBAstc) = {cba:.3e} <= delta_125(SGDstc) = {sgd:.3e}"))
}

fn c5_slopes() -> Outcome {
    let mut spec = fig1a(1000);
    spec.panels[0].series.retain(|s| s.algorithm == "cba" || s.algorithm == "cbastc");
    let r = run_experiment(&spec, threads()).unwrap();
    let stc = r.series("cbastc").unwrap().stats.loglog_slope(50, 500);
    let sqrt = r.series("cba").unwrap().stats.loglog_slope(50, 500);
    outcome(
        (-1.6..=-0.5).contains(&stc) && (-1.2..=-0.3).contains(&sqrt),
        format!("CBAstc slope {stc:.3} in [-1.6,-0.5]; CBA slope {sqrt:.3} in [-1.2,-0.3]"),
    )
}

fn c6_schedules() -> Outcome {
    let a = StagePlan::new(StageVariant::A, 3, 0.5, 0.0).unwrap().total();
    let b = StagePlan::new(StageVariant::B, 2, 0.5, 1.0).unwrap().total();
    outcome(a == 112 && b == 56, format!("variant A K=3 total {a}; variant B K=2 total {b}"))
}

fn c7_indistinguishable() -> Outcome {
    let n = 100_000u32;
    let part = |a, b| UniformComponent { weight: 0.5, a, b };
    let laws = [
        DistributionSpec::mixture(vec![part(-3.0, -2.0), part(2.0, 3.0)]).unwrap(),
        DistributionSpec::mixture(vec![part(-3.0, -2.0), part(3.0, 4.0)]).unwrap(),
    ];
    let tol = 3.0 * (0.25 / n as f64).sqrt();
    let contract = RngContract::new(107);
    let mut worst: f64 = 0.0;
    for (li, law) in laws.iter().enumerate() {
        for (xi, x) in [-1.0, -0.5, 0.0, 0.5, 1.0].into_iter().enumerate() {
            let mut rng = contract.stream(StreamId::new(li as u32, xi as u32));
            let below = (0..n)
                .filter(|_| {
                    let mut r = Round::begin(law, x, 1, Access::ComparisonOnly, &mut rng).unwrap();
                    r.compare(x).unwrap() == BinaryOutcome::SampleBelow
                })
                .count();
            worst = worst.max((below as f64 / n as f64 - 0.5).abs());
        }
    }
    outcome(worst <= tol, format!("max |freq - 0.5| = {worst:.4} <= {tol:.4}"))
}

fn c8_qp_ordering() -> Outcome {
    let mut spec = preset("fig5").unwrap();
    spec.panels.retain(|p| p.label == "d=5");
    spec.trials = 200;
    spec.seed = 7;
    let r = run_experiment(&spec, threads()).unwrap();
    let cba = &r.series("d=5/cba-qp").unwrap().stats;
    let mcba = &r.series("d=5/mcba-qp").unwrap().stats;
    let order = mcba.at(2000) <= 1.2 * cba.at(2000);
    let (rc, rm) = (cba.at(2000) / cba.at(200), mcba.at(2000) / mcba.at(200));
    outcome(
        order && rc <= 0.2 && rm <= 0.2,
        format!(
            "delta_2000 MCBA-QP {:.3e} vs 1.2 x CBA-QP {:.3e} ({}); delta_2000/delta_200: CBA-QP {rc:.3}, MCBA-QP {rm:.3} (need <= 0.2)",
            mcba.at(2000),
            1.2 * cba.at(2000),
            if order { "ok" } else { "violated" }
        ),
    )
}

fn c9_categorical() -> Outcome {
    let mut spec = fig1a(1000);
    spec.panels[0].series = vec![SeriesSpec::new("cba").band("uniform"), SeriesSpec::new("cba-c:5")];
    let r = run_experiment(&spec, threads()).unwrap();
    let cba = r.series("cba").unwrap().stats.at(500);
    let cat = r.series("cba-c:5").unwrap().stats.at(500);
    outcome(cat <= cba, format!("delta_500(CBA-C m=5) = {cat:.3e} <= delta_500(CBA) = {cba:.3e}"))
}

fn c10_moreau() -> Outcome {
    let quad = MoreauParams::new(0.25, 1.0).unwrap();
    let q = moreau_stationarity(|y: f64| y * y, 1.0, &quad, Interval::new(-10.0, 10.0));
    let closed_ok = (q - 4.0 / 3.0).abs() <= 1e-6;

    let rho = 0.2;
    let obj: Objective1D<f64> = Objective1D::weak_abs(rho, Interval::new(-2.0, 2.0)).unwrap();
    let dist = DistributionSpec::uniform(-0.01, 0.01).unwrap();
    let fam = BandFamily::Uniform;
    let g2 = AssumptionConstants::compute(&obj, &dist, &fam, 401).unwrap().g2;
    let params = MoreauParams::new(1.0 / (2.0 * rho), rho).unwrap();
    let h = |y: f64| obj.expected_value(&dist, y);
    let bounds = obj.bounds;
    let min_h = bounds.grid(4001).into_iter().map(h).fold(f64::INFINITY, f64::min);
    let (horizon, trials, x1) = (5000, 200, 1.5);
    let envelope = moreau_point(h, x1, &params, bounds).envelope;
    let bound = 2.0 * ((envelope - min_h) + rho * g2) / (horizon as f64).sqrt();
    let contract = RngContract::new(110);
    let cfg = SolverConfig::new(x1, horizon, StepSchedule::ConstOverSqrtT { horizon }).with_output(OutputMode::RandomIndex);
    let mut w = Welford::default();
    for trial in 0..trials {
        let mut streams = TrialStreams::new(&contract, trial, 0);
        let rec = run_cba(&cfg, &dist, &obj, &fam, None, &mut streams).unwrap();
        w.push(moreau_stationarity(h, rec.output, &params, bounds).powi(2));
    }
    let ok = closed_ok && w.mean <= 10.0 * bound;
    outcome(
        ok,
        format!("quadratic: {q:.9} (4/3); weakly convex: E|H'_lambda|^2 = {:.3e} <= 10 x {bound:.3e}", w.mean),
    )
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let out = dir.path().join(format!("fig1a_{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_cbopt"))
            .args(["run", "--preset", "fig1a", "--trials", "50", "--seed", "7", "--threads", threads, "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("1"), run("8"));
    outcome(a == b && !a.is_empty(), format!("threads=1 vs threads=8: {} bytes, identical = {}", a.len(), a == b))
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "estimator unbiasedness", 60.0, c1_unbiasedness),
        (2, "second-moment bound", 60.0, c2_second_moment),
        (3, "QP estimator unbiasedness", 30.0, c3_qp_unbiasedness),
        (4, "fig1a CBAstc vs SGDstc", 20.0, c4_convergence),
        (5, "rate slopes", 60.0, c5_slopes),
        (6, "MCBA stage totals", 1.0, c6_schedules),
        (7, "one-comparison impossibility", 5.0, c7_indistinguishable),
        (8, "QP convergence ordering", 120.0, c8_qp_ordering),
        (9, "CBA-C vs CBA", 60.0, c9_categorical),
        (10, "Moreau diagnostic", 30.0, c10_moreau),
        (11, "determinism across threads", 120.0, c11_determinism),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, budget, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let started = Instant::now();
        let out = check();
        let elapsed = started.elapsed();
        let in_time = elapsed <= Duration::from_secs_f64(budget);
        let passed = out.passed && in_time;
        println!(
            "criterion {id:>2} {:<4} {name} [{:.1}s of {budget:.0}s] {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
        if !passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
