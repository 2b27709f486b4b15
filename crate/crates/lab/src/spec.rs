//! Experiment descriptions, as built by presets or read from JSON.

use cbopt::problems::{ground_truth, DistributionSpec, GroundTruth, Objective1D};
use cbopt::sampling::{BandFamily, RadialDensity};
use cbopt::solvers::Algorithm;
use cbopt::oracle::CategoricalScheme;
use cbopt::Interval;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// Tail rate used for the last band of categorical schemes unless a band
/// selector overrides it.
pub const DEFAULT_TAIL_RATE: f64 = 0.0625;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Written to the `preset` column of the CSV.
    pub name: String,
    /// Iterations per run.
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub panels: Vec<PanelSpec>,
    /// Origin of each numeric setting, copied into the CSV metadata.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<FieldNote>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldNote {
    pub field: String,
    pub value: String,
    /// True for harness defaults, false for values taken from the method's
    /// published experiments.
    pub declared: bool,
}

impl FieldNote {
    pub fn new(field: &str, value: impl ToString, declared: bool) -> Self {
        Self { field: field.into(), value: value.to_string(), declared }
    }
}

/// One problem instance and the series run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    /// Prefix of the series labels; may be empty for single-panel runs.
    #[serde(default)]
    pub label: String,
    pub problem: ProblemSpec,
    pub series: Vec<SeriesSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// One-dimensional problem; `objective` and `distribution` use the
    /// library's id syntax (`h1`, `normal:100,100`, ...).
    Scalar {
        objective: String,
        distribution: String,
        /// Strong-convexity parameter used by `cbastc`, `sgdstc` and `mcba`.
        mu: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<[f64; 2]>,
    },
    /// `Q = Q'ᵀQ'/d + I` with standard normal `Q'`, `ξ ~ N(center·1, sd² I)`
    /// on the box `[lo, hi]^d`.
    Qp { d: usize, center: f64, sd: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    /// `cba`, `cbastc`, `mcba`, `cba-c:<m>`, `cba-qp`, `mcba-qp`, `sgd` or
    /// `sgdstc`.
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `uniform`, `exp:<λ>` or `optimal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<String>,
    /// `rexp:<λ>` or `runiform:<R>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<String>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub batch: usize,
}

fn one() -> usize {
    1
}

fn is_one(v: &usize) -> bool {
    *v == 1
}

impl SeriesSpec {
    pub fn new(algorithm: &str) -> Self {
        Self { algorithm: algorithm.into(), label: None, band: None, radial: None, batch: 1 }
    }

    pub fn band(mut self, band: &str) -> Self {
        self.band = Some(band.into());
        self
    }

    pub fn radial(mut self, radial: &str) -> Self {
        self.radial = Some(radial.into());
        self
    }

    pub fn batch(mut self, batch: usize) -> Self {
        self.batch = batch;
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> LabResult<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.resolve()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Checks every id and parameter; returns the runnable form.
    pub fn resolve(&self) -> LabResult<Vec<Panel>> {
        if self.trials == 0 {
            return Err(LabError::InvalidSpec("trials must be at least 1".into()));
        }
        if self.iters == 0 {
            return Err(LabError::InvalidSpec("iters must be at least 1".into()));
        }
        if self.panels.is_empty() {
            return Err(LabError::InvalidSpec("no panels".into()));
        }
        let panels: Vec<Panel> = self
            .panels
            .iter()
            .map(Panel::resolve)
            .collect::<LabResult<_>>()
            .map_err(|e| match e {
                LabError::Core(c) => LabError::InvalidSpec(c.to_string()),
                other => other,
            })?;
        let mut labels = std::collections::HashSet::new();
        let mut streams = std::collections::HashSet::new();
        for s in panels.iter().flat_map(|p| &p.series) {
            if !labels.insert(s.label.clone()) {
                return Err(LabError::InvalidSpec(format!("duplicate series label {:?}", s.label)));
            }
            if !streams.insert(s.stream) {
                return Err(LabError::InvalidSpec(format!("series label {:?} collides with another; rename it", s.label)));
            }
        }
        Ok(panels)
    }

    pub fn series_labels(&self) -> LabResult<Vec<String>> {
        Ok(self.resolve()?.into_iter().flat_map(|p| p.series.into_iter().map(|s| s.label)).collect())
    }
}

/// Resolved problem of a panel.
#[derive(Debug, Clone)]
pub enum Problem {
    Scalar { obj: Objective1D<f64>, dist: DistributionSpec<f64>, gt: GroundTruth<f64>, mu: f64 },
    Qp { d: usize, center: f64, sd: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub problem: Problem,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub algorithm: Algorithm,
    pub band: Option<BandFamily<f64>>,
    pub scheme: Option<CategoricalScheme<f64>>,
    pub radial: Option<RadialDensity<f64>>,
    pub batch: usize,
    /// Algorithm index of the series' random streams.
    pub stream: u32,
}

/// 32-bit FNV-1a of the label, folded so `4·index + sub` stays clear of the
/// reserved tags.
pub fn stream_index(label: &str) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in label.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h & 0x1fff_ffff
}

impl Panel {
    fn resolve(spec: &PanelSpec) -> LabResult<Self> {
        let bad = |msg: String| LabError::InvalidSpec(format!("panel {:?}: {msg}", spec.label));
        let problem = match &spec.problem {
            ProblemSpec::Scalar { objective, distribution, mu, bounds } => {
                let mut obj: Objective1D<f64> = objective.parse()?;
                if let Some([lo, hi]) = bounds {
                    if !(lo < hi) {
                        return Err(bad(format!("bounds [{lo}, {hi}] are empty")));
                    }
                    obj = obj.with_bounds(Interval::new(*lo, *hi));
                }
                let dist: DistributionSpec<f64> = distribution.parse()?;
                if !(*mu > 0.0) {
                    return Err(bad(format!("mu must be positive, got {mu}")));
                }
                let gt = ground_truth(&obj, &dist)?;
                Problem::Scalar { obj, dist, gt, mu: *mu }
            }
            ProblemSpec::Qp { d, center, sd, lo, hi } => {
                if *d == 0 {
                    return Err(bad("dimension must be at least 1".into()));
                }
                if !(lo < hi) || !(center >= lo && center <= hi) || !(*sd > 0.0) {
                    return Err(bad("need lo < hi, center inside the box and sd > 0".into()));
                }
                Problem::Qp { d: *d, center: *center, sd: *sd, lo: *lo, hi: *hi }
            }
        };
        if spec.series.is_empty() {
            return Err(bad("no series".into()));
        }
        let series = spec.series.iter().map(|s| Series::resolve(&spec.label, s, &problem)).collect::<LabResult<_>>()?;
        Ok(Self { problem, series })
    }
}

impl Series {
    fn resolve(panel: &str, spec: &SeriesSpec, problem: &Problem) -> LabResult<Self> {
        let algorithm: Algorithm = spec.algorithm.parse()?;
        let short = spec.label.clone().unwrap_or_else(|| spec.algorithm.clone());
        let label = if panel.is_empty() { short } else { format!("{panel}/{short}") };
        let bad = |msg: &str| LabError::InvalidSpec(format!("series {label:?}: {msg}"));
        if spec.batch == 0 {
            return Err(bad("batch must be at least 1"));
        }
        let is_qp = matches!(problem, Problem::Qp { .. });
        let band: Option<BandFamily<f64>> = spec.band.as_deref().map(str::parse).transpose()?;
        let radial: Option<RadialDensity<f64>> = spec.radial.as_deref().map(str::parse).transpose()?;
        let mut scheme = None;
        match algorithm {
            Algorithm::Cba | Algorithm::CbaStc | Algorithm::Mcba => {
                if is_qp {
                    return Err(bad("scalar algorithm on a quadratic panel"));
                }
                let fam = band.as_ref().ok_or_else(|| bad("a band selector is required"))?;
                if let Problem::Scalar { obj, .. } = problem {
                    fam.validate_for(obj)?;
                }
            }
            Algorithm::CbaC { bands } => {
                if is_qp {
                    return Err(bad("scalar algorithm on a quadratic panel"));
                }
                let rate = match band {
                    None => DEFAULT_TAIL_RATE,
                    Some(BandFamily::Exponential { rate }) => rate,
                    Some(_) => return Err(bad("categorical schemes accept only an exp:<λ> tail band")),
                };
                scheme = Some(CategoricalScheme::with_bands(bands, rate)?);
            }
            Algorithm::CbaQp | Algorithm::McbaQp => {
                if !is_qp {
                    return Err(bad("quadratic algorithm on a scalar panel"));
                }
                if radial.is_none() {
                    return Err(bad("a radial density is required"));
                }
            }
            Algorithm::Sgd | Algorithm::SgdStc => {
                if band.is_some() || radial.is_some() || spec.batch != 1 {
                    return Err(bad("the baseline takes no band, radial density or batch"));
                }
                if is_qp && algorithm == Algorithm::SgdStc {
                    return Err(bad("quadratic panels run sgd with the CBA-QP step law; use `sgd`"));
                }
            }
        }
        if spec.batch != 1 && !matches!(algorithm, Algorithm::Cba | Algorithm::CbaStc | Algorithm::Mcba | Algorithm::CbaC { .. }) {
            return Err(bad("mini-batches apply to scalar comparison algorithms only"));
        }
        let stream = stream_index(&label);
        Ok(Self { label, algorithm, band, scheme, radial, batch: spec.batch, stream })
    }
}
