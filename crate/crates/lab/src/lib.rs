//! Experiment harness for `cbopt`: presets, a parallel trial runner,
//! aggregation into mean gap and standard error, CSV/SVG output and the
//! self-check suites behind `cbopt verify`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod output;
pub mod presets;
pub mod runner;
pub mod spec;
pub mod stats;
pub mod svg;
pub mod verify;

pub use error::{LabError, LabResult};
pub use runner::{run_experiment, ExperimentResult, RunOptions, SeriesResult};
pub use spec::{ExperimentSpec, FieldNote, PanelSpec, ProblemSpec, SeriesSpec};
pub use stats::{SeriesStats, Welford};
