use cbopt::oracle::{Access, Round};
use cbopt::problems::{default_bounds, DistributionSpec, Objective1D, Side};
use cbopt::rng::{RngContract, StreamId, TrialStreams};
use cbopt::sampling::{Band, BandFamily, SideDensity};
use cbopt::solvers::{
    project_interval, run_cba, run_cba_c, run_mcba, run_sgd, SolverConfig, StagePlan, StageVariant, StepSchedule,
};
use cbopt::oracle::CategoricalScheme;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = BandFamily<f64>> {
    prop_oneof![Just(BandFamily::Uniform), (0.01f64..1.0).prop_map(|rate| BandFamily::Exponential { rate })]
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Below), Just(Side::Above)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn density_vanishes_on_wrong_side(x in 50.0f64..=150.0, z in 0.0f64..200.0, fam in family(), side in side()) {
        let dist = DistributionSpec::normal(100.0, 100.0).unwrap();
        let obj = Objective1D::squared(default_bounds());
        let band = fam.make(&dist, &obj, x, side).unwrap();
        let wrong = match side { Side::Below => z >= x, Side::Above => z <= x };
        if wrong {
            prop_assert_eq!(band.pdf(z), 0.0);
        }
    }

    #[test]
    fn draws_lie_in_support(x in 50.0f64..=150.0, fam in family(), side in side(), seed in 0u64..1000) {
        let dist = DistributionSpec::uniform(50.0, 150.0).unwrap();
        let obj = Objective1D::asymmetric(default_bounds());
        let band = fam.make(&dist, &obj, x, side).unwrap();
        let mut rng = RngContract::new(seed).stream(StreamId::new(0, 1));
        for _ in 0..200 {
            let z = band.draw(&mut rng);
            prop_assert!(band.pdf(z) > 0.0);
            prop_assert_eq!(Side::locate(z, x), side);
        }
    }

    #[test]
    fn optimal_band_vanishes_on_wrong_side(x in 55.0f64..=145.0, z in 0.0f64..200.0, side in side()) {
        let dist = DistributionSpec::normal(100.0, 100.0).unwrap();
        let obj = Objective1D::asymmetric(default_bounds());
        let band = Band::optimal(&dist, &obj, x, side).unwrap();
        let wrong = match side { Side::Below => z >= x, Side::Above => z <= x };
        if wrong {
            prop_assert_eq!(band.pdf(z), 0.0);
        }
    }

    #[test]
    fn step_sizes_positive(t in 1usize..100_000, mu in 0.01f64..10.0, lip in 0.0f64..10.0, k in 1u32..20) {
        let all = [
            StepSchedule::ConstOverSqrtT { horizon: t },
            StepSchedule::InvSqrtT,
            StepSchedule::SmoothConst { lip, horizon: t },
            StepSchedule::SmoothDecay { lip },
            StepSchedule::Strong { mu },
            StepSchedule::StrongSmooth { mu, lip },
            StepSchedule::Stage { k, mu },
            StepSchedule::StageSmooth { k, mu, lip },
        ];
        for s in all {
            prop_assert!(s.validate().is_ok());
            prop_assert!(s.step_size(t) > 0.0);
        }
    }

    #[test]
    fn stage_plan_totals(k in 1u32..16) {
        let a = StagePlan::new(StageVariant::A, k, 1.0, 0.0).unwrap();
        let b = StagePlan::new(StageVariant::B, k, 1.0, 1.0).unwrap();
        let sum_a: usize = (1..=k).map(|j| 1usize << (j + 3)).sum();
        prop_assert_eq!(a.total(), sum_a);
        prop_assert_eq!(b.total(), sum_a + 4 * k as usize);
    }

    #[test]
    fn projection_is_a_clamp(v in -1e6f64..1e6, lo in -100.0f64..100.0, w in 0.0f64..100.0) {
        let hi = lo + w;
        let p = project_interval(v, lo, hi);
        prop_assert!(p >= lo && p <= hi);
        prop_assert_eq!(project_interval(p, lo, hi), p);
        if v >= lo && v <= hi {
            prop_assert_eq!(p, v);
        }
    }

    #[test]
    fn comparison_budget(xi in -10.0f64..10.0, budget in 0u32..6) {
        let mut r = Round::with_sample(xi, budget, Access::ComparisonOnly);
        for _ in 0..budget {
            prop_assert!(r.compare(0.0).is_ok());
        }
        prop_assert!(r.compare(0.0).is_err());
        prop_assert!(r.reveal_for_baseline().is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solvers_stay_feasible(x1 in 50.0f64..=150.0, seed in 0u64..10_000, normal in any::<bool>(), h2 in any::<bool>()) {
        let dist = if normal {
            DistributionSpec::normal(100.0, 100.0).unwrap()
        } else {
            DistributionSpec::uniform(50.0, 150.0).unwrap()
        };
        let obj = if h2 { Objective1D::asymmetric(default_bounds()) } else { Objective1D::squared(default_bounds()) };
        let fam = if normal { BandFamily::Exponential { rate: 0.0625 } } else { BandFamily::Uniform };
        let contract = RngContract::new(seed);
        let cfg = SolverConfig::new(x1, 200, StepSchedule::Strong { mu: 0.5 });
        let scheme = CategoricalScheme::with_bands(3, 0.0625).unwrap();
        let plan = StagePlan::covering(StageVariant::A, 200, 0.5, 0.0).unwrap();
        let records = [
            run_cba(&cfg, &dist, &obj, &fam, None, &mut TrialStreams::new(&contract, 0, 0)).unwrap(),
            run_cba_c(&cfg, &dist, &obj, &scheme, None, &mut TrialStreams::new(&contract, 0, 1)).unwrap(),
            run_mcba(x1, &plan, 1, &dist, &obj, &fam, None, &mut TrialStreams::new(&contract, 0, 2)).unwrap(),
            run_sgd(&cfg, &dist, &obj, None, &mut TrialStreams::new(&contract, 0, 3)).unwrap(),
        ];
        for rec in &records {
            prop_assert_eq!(rec.iterates.len(), 200);
            prop_assert!(rec.iterates.iter().all(|x| (50.0..=150.0).contains(x)));
            prop_assert_eq!(rec.revealed == 0, rec.comparisons == 400);
        }
    }
}
