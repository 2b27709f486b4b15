use cbopt::oracle::{Access, BinaryOutcome, Round};
use cbopt::problems::{default_bounds, ground_truth, DistributionSpec, Objective1D, Side, UniformComponent};
use cbopt::rng::{RngContract, StreamId, TrialStreams};
use cbopt::sampling::{BandFamily, TabulatedDensity};
use cbopt::solvers::{run_cba, SolverConfig, StepSchedule};
use cbopt::Interval;

#[test]
fn optimal_table_inverse_cdf() {
    let cases = [
        (DistributionSpec::uniform(0.0, 1.0).unwrap(), Objective1D::squared(Interval::new(0.0, 1.0)), 1.0, Side::Below),
        (DistributionSpec::normal(100.0, 100.0).unwrap(), Objective1D::asymmetric(default_bounds()), 104.0, Side::Above),
    ];
    for (i, (dist, obj, x, side)) in cases.into_iter().enumerate() {
        let table = TabulatedDensity::optimal(&dist, &obj, x, side).unwrap();
        let mut rng = RngContract::new(60 + i as u64).stream(StreamId::new(0, 1));
        let n = 1_000_000;
        let mut draws: Vec<f64> = (0..n).map(|_| table.draw(&mut rng)).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (k, z) in draws.iter().enumerate() {
            let f = table.cdf(*z);
            ks = ks.max((f - k as f64 / n as f64).abs()).max((f - (k + 1) as f64 / n as f64).abs());
        }
        assert!(ks <= 0.005, "KS distance {ks}");
    }
}

/// Two laws agreeing at the query points cannot be told apart by a single
/// comparison per round.
#[test]
fn one_comparison_indistinguishable() {
    let f1 = DistributionSpec::mixture(vec![
        UniformComponent { weight: 0.5, a: -3.0, b: -2.0 },
        UniformComponent { weight: 0.5, a: 2.0, b: 3.0 },
    ])
    .unwrap();
    let f2 = DistributionSpec::mixture(vec![
        UniformComponent { weight: 0.5, a: -3.0, b: -2.0 },
        UniformComponent { weight: 0.5, a: 3.0, b: 4.0 },
    ])
    .unwrap();
    let n = 100_000;
    let band = 3.0 * (0.25 / n as f64).sqrt();
    for (li, law) in [f1, f2].iter().enumerate() {
        for (xi, x) in [-1.0, -0.5, 0.0, 0.5, 1.0].into_iter().enumerate() {
            let mut rng = RngContract::new(70).stream(StreamId::new(li as u32, xi as u32));
            let mut below = 0;
            for _ in 0..n {
                let mut r = Round::begin(law, x, 1, Access::ComparisonOnly, &mut rng).unwrap();
                if r.compare(x).unwrap() == BinaryOutcome::SampleBelow {
                    below += 1;
                }
            }
            let freq = below as f64 / n as f64;
            assert!((freq - 0.5).abs() <= band, "law {li} x={x}: {freq}");
        }
    }
}

#[test]
fn single_precision_run() {
    let dist = DistributionSpec::<f32>::uniform(50.0, 150.0).unwrap();
    let obj = Objective1D::<f32>::squared(default_bounds());
    let gt = ground_truth(&obj, &dist).unwrap();
    let cfg = SolverConfig::new(130.0f32, 500, StepSchedule::Strong { mu: 0.5 });
    let mut s = TrialStreams::new(&RngContract::new(1), 0, 0);
    let rec = run_cba(&cfg, &dist, &obj, &BandFamily::Uniform, Some(&gt), &mut s).unwrap();
    assert!(rec.iterates.iter().all(|x| (50.0..=150.0).contains(x)));
    assert!(rec.gaps.unwrap()[499] < 0.5);
}
