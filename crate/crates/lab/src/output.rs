//! CSV results and their JSON metadata sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, LabResult};
use crate::runner::ExperimentResult;
use crate::spec::{ExperimentSpec, FieldNote};
use crate::stats::SeriesStats;

pub const CSV_HEADER: [&str; 7] = ["preset", "algorithm", "t", "mean_gap", "stderr", "trials", "seed"];

/// Writes one row per (series, iteration). Floats use Rust's shortest
/// round-trip formatting, so the file is byte-stable for a given seed.
pub fn write_csv(result: &ExperimentResult, path: &Path) -> LabResult<()> {
    if result.series.is_empty() {
        return Err(LabError::InvalidSpec("no results to write".into()));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(CSV_HEADER)?;
    let seed = result.spec.seed.to_string();
    for s in &result.series {
        let trials = s.stats.trials.to_string();
        for t in 0..s.stats.len() {
            w.write_record([
                result.spec.name.as_str(),
                s.label.as_str(),
                &(t + 1).to_string(),
                &s.stats.mean[t].to_string(),
                &s.stats.stderr[t].to_string(),
                &trials,
                &seed,
            ])?;
        }
    }
    w.flush().map_err(|e| LabError::io(path, e))?;
    Ok(())
}

fn csv_io(path: &Path, e: csv::Error) -> LabError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => LabError::io(path, io),
        other => LabError::InvalidSpec(format!("csv: {other:?}")),
    }
}

/// Series read back from a results file, in file order.
pub fn read_csv(path: &Path) -> LabResult<Vec<(String, SeriesStats)>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(LabError::InvalidSpec(format!("{} does not have the results header", path.display())));
    }
    let mut out: Vec<(String, SeriesStats)> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |i: usize| -> LabResult<f64> {
            rec[i].parse().map_err(|_| LabError::InvalidSpec(format!("bad number {:?} in column {}", &rec[i], CSV_HEADER[i])))
        };
        let label = &rec[1];
        let trials = num(5)? as usize;
        if out.last().is_none_or(|(l, _)| l != label) {
            out.push((label.to_string(), SeriesStats { mean: vec![], stderr: vec![], trials }));
        }
        let s = &mut out.last_mut().unwrap().1;
        s.mean.push(num(3)?);
        s.stderr.push(num(4)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct Meta<'a> {
    preset: &'a str,
    seed: u64,
    trials: usize,
    iters: usize,
    threads: usize,
    provenance: &'a [FieldNote],
    series: Vec<SeriesMeta<'a>>,
    spec: &'a ExperimentSpec,
}

#[derive(Serialize)]
struct SeriesMeta<'a> {
    label: &'a str,
    requested: usize,
    aborted: usize,
    trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_error: Option<&'a str>,
    /// Informational only; varies between machines and runs.
    wall_seconds: f64,
}

pub fn meta_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes `<csv>.meta.json` with the spec, field provenance, abort counts
/// and timings.
pub fn write_meta(result: &ExperimentResult, csv: &Path) -> LabResult<PathBuf> {
    let meta = Meta {
        preset: &result.spec.name,
        seed: result.spec.seed,
        trials: result.spec.trials,
        iters: result.spec.iters,
        threads: result.threads,
        provenance: &result.spec.provenance,
        series: result
            .series
            .iter()
            .map(|s| SeriesMeta {
                label: &s.label,
                requested: s.requested,
                aborted: s.aborted,
                trials: s.stats.trials,
                first_error: s.first_error.as_deref(),
                wall_seconds: s.wall.as_secs_f64(),
            })
            .collect(),
        spec: &result.spec,
    };
    let path = meta_path(csv);
    let text = serde_json::to_string_pretty(&meta)?;
    fs::write(&path, text + "\n").map_err(|e| LabError::io(&path, e))?;
    Ok(path)
}
