//! Named experiments reproducing the published figures.

use crate::error::{LabError, LabResult};
use crate::spec::{ExperimentSpec, FieldNote, PanelSpec, ProblemSpec, SeriesSpec};

/// Trials per experiment unless overridden; the published runs use 2000.
pub const DEFAULT_TRIALS: usize = 200;
pub const PAPER_TRIALS: usize = 2000;
pub const DEFAULT_SEED: u64 = 7;
/// Rate of the exponential sampling densities.
pub const EXP_RATE: f64 = 0.0625;
pub const MU: f64 = 0.5;

pub const PRESETS: &[(&str, &str)] = &[
    ("fig1a", "h1, xi ~ U[50,150]: CBA, CBAstc, MCBA, SGD, SGDstc"),
    ("fig1b", "h1, xi ~ N(100,100): CBA, CBAstc, MCBA, SGD, SGDstc"),
    ("fig1c", "h2, xi ~ U[50,150]: CBA, CBAstc, MCBA, SGD, SGDstc"),
    ("fig1d", "h2, xi ~ N(100,100): CBA, CBAstc, MCBA, SGD, SGDstc"),
    ("fig2", "exponential rate sweep 2^-8..2^1, h1 and h2 under N(100,100)"),
    ("fig3", "exponential vs optimal sampling densities for CBA on h1"),
    ("fig4", "mini-batch CBA with S = 1, 2, 5, 10, 100 on all four instances"),
    ("fig5", "quadratic problem, d = 5 and 20: SGD, CBA-QP, MCBA-QP"),
    ("figE", "categorical CBA-C with m = 3, 5 on all four instances"),
];

const UNIFORM: &str = "uniform:50,150";
const NORMAL: &str = "normal:100,100";

fn scalar(objective: &str, distribution: &str) -> ProblemSpec {
    ProblemSpec::Scalar { objective: objective.into(), distribution: distribution.into(), mu: MU, bounds: None }
}

fn default_band(distribution: &str) -> String {
    if distribution == UNIFORM {
        "uniform".into()
    } else {
        format!("exp:{EXP_RATE}")
    }
}

fn instances() -> [(&'static str, &'static str, &'static str); 4] {
    [
        ("h1-uniform", "h1", UNIFORM),
        ("h1-normal", "h1", NORMAL),
        ("h2-uniform", "h2", UNIFORM),
        ("h2-normal", "h2", NORMAL),
    ]
}

fn fig1_series(band: &str) -> Vec<SeriesSpec> {
    vec![
        SeriesSpec::new("cba").band(band),
        SeriesSpec::new("cbastc").band(band),
        SeriesSpec::new("mcba").band(band),
        SeriesSpec::new("sgd"),
        SeriesSpec::new("sgdstc"),
    ]
}

fn base_notes(iters: usize, published_iters: bool) -> Vec<FieldNote> {
    vec![
        FieldNote::new("iters", iters, !published_iters),
        FieldNote::new("trials", DEFAULT_TRIALS, true),
        FieldNote::new("seed", DEFAULT_SEED, true),
        FieldNote::new("x1", "uniform on the feasible set", false),
    ]
}

fn scalar_notes(iters: usize) -> Vec<FieldNote> {
    let mut n = base_notes(iters, true);
    n.extend([
        FieldNote::new("mu", MU, false),
        FieldNote::new("bounds", "[50,150]", false),
        FieldNote::new("band.exp.rate", EXP_RATE, false),
        FieldNote::new("mcba.stage_lengths", "2^(k+3), last stage truncated to iters", false),
    ]);
    n
}

fn experiment(name: &str, iters: usize, panels: Vec<PanelSpec>, provenance: Vec<FieldNote>) -> ExperimentSpec {
    ExperimentSpec { name: name.into(), iters, trials: DEFAULT_TRIALS, seed: DEFAULT_SEED, panels, provenance }
}

pub fn preset(name: &str) -> LabResult<ExperimentSpec> {
    let spec = match name {
        "fig1a" | "fig1b" | "fig1c" | "fig1d" => {
            let (objective, distribution) = match name {
                "fig1a" => ("h1", UNIFORM),
                "fig1b" => ("h1", NORMAL),
                "fig1c" => ("h2", UNIFORM),
                _ => ("h2", NORMAL),
            };
            let panel = PanelSpec {
                label: String::new(),
                problem: scalar(objective, distribution),
                series: fig1_series(&default_band(distribution)),
            };
            experiment(name, 500, vec![panel], scalar_notes(500))
        }
        "fig2" => {
            let panels = ["h1", "h2"]
                .into_iter()
                .map(|objective| PanelSpec {
                    label: objective.into(),
                    problem: scalar(objective, NORMAL),
                    series: ["cba", "cbastc", "mcba"]
                        .into_iter()
                        .flat_map(|alg| {
                            (-8..=1).map(move |e| {
                                let band = format!("exp:{}", 2f64.powi(e));
                                SeriesSpec::new(alg).band(&band).label(format!("{alg}@log2rate={e}"))
                            })
                        })
                        .collect(),
                })
                .collect();
            let mut notes = scalar_notes(500);
            notes.push(FieldNote::new("band.exp.rate", "2^-8..2^1", true));
            experiment(name, 500, panels, notes)
        }
        "fig3" => {
            let panels = [("uniform", UNIFORM), ("normal", NORMAL)]
                .into_iter()
                .map(|(label, distribution)| PanelSpec {
                    label: label.into(),
                    problem: scalar("h1", distribution),
                    series: vec![
                        SeriesSpec::new("cba").band(&format!("exp:{EXP_RATE}")).label("cba@exp"),
                        SeriesSpec::new("cba").band("optimal").label("cba@optimal"),
                    ],
                })
                .collect();
            experiment(name, 500, panels, scalar_notes(500))
        }
        "fig4" => {
            let panels = instances()
                .into_iter()
                .map(|(label, objective, distribution)| {
                    let band = default_band(distribution);
                    PanelSpec {
                        label: label.into(),
                        problem: scalar(objective, distribution),
                        series: [1, 2, 5, 10, 100]
                            .into_iter()
                            .map(|s| SeriesSpec::new("cba").band(&band).batch(s).label(format!("cba@S={s}")))
                            .collect(),
                    }
                })
                .collect();
            let mut notes = scalar_notes(500);
            notes.push(FieldNote::new("batch", "1,2,5,10,100", false));
            experiment(name, 500, panels, notes)
        }
        "fig5" => {
            let radial = format!("rexp:{EXP_RATE}");
            let panels = [5, 20]
                .into_iter()
                .map(|d| PanelSpec {
                    label: format!("d={d}"),
                    problem: ProblemSpec::Qp { d, center: 100.0, sd: 50.0, lo: 50.0, hi: 150.0 },
                    series: vec![
                        SeriesSpec::new("sgd"),
                        SeriesSpec::new("cba-qp").radial(&radial),
                        SeriesSpec::new("mcba-qp").radial(&radial),
                    ],
                })
                .collect();
            let mut notes = base_notes(2000, true);
            notes.extend([
                FieldNote::new("d", "5,20", false),
                FieldNote::new("xi", "N(100*1, 50^2 I)", false),
                FieldNote::new("box", "[50,150]^d", false),
                FieldNote::new("radial.exp.rate", EXP_RATE, false),
                FieldNote::new("Q", "one draw per panel and seed", true),
                FieldNote::new("mcba.stage_lengths", "2^(k+3)+4, last stage truncated to iters", false),
            ]);
            experiment(name, 2000, panels, notes)
        }
        "figE" => {
            let panels = instances()
                .into_iter()
                .map(|(label, objective, distribution)| {
                    let band = default_band(distribution);
                    PanelSpec {
                        label: label.into(),
                        problem: scalar(objective, distribution),
                        series: vec![
                            SeriesSpec::new("sgd"),
                            SeriesSpec::new("cba").band(&band),
                            SeriesSpec::new("cba-c:3"),
                            SeriesSpec::new("cba-c:5"),
                        ],
                    }
                })
                .collect();
            let mut notes = scalar_notes(500);
            notes.extend([
                FieldNote::new("categories", "3,5", false),
                FieldNote::new("thresholds.m3", "0,3,7,inf", true),
                FieldNote::new("thresholds.m5", "0,2,4,7,12,inf", true),
                FieldNote::new("categorical.tail_rate", EXP_RATE, false),
            ]);
            experiment(name, 500, panels, notes)
        }
        other => return Err(LabError::UnknownPreset(other.into())),
    };
    Ok(spec)
}
