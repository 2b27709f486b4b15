#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};

use cbopt_lab::output::{write_csv, write_meta};
use cbopt_lab::presets::{preset, PRESETS};
use cbopt_lab::svg::plot_svg;
use cbopt_lab::verify::{self, VerifyOptions};
use cbopt_lab::{run_experiment, ExperimentSpec, LabError, RunOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_RUN: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "cbopt", version, about = "Comparison-based stochastic optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a JSON experiment and write the mean-gap CSV.
    #[command(group(ArgGroup::new("source").required(true).args(["preset", "config"])))]
    Run {
        #[arg(long)]
        preset: Option<String>,
        /// JSON experiment description (see README).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List the built-in presets.
    ListPresets,
    /// Run the self-check suites.
    Verify {
        /// Fewer samples, for a fast smoke check.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Multiply every sampling density by this factor (fault injection).
        #[arg(long, hide = true, default_value_t = 1.0)]
        fault_pdf_scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::ListPresets => {
            for (name, about) in PRESETS {
                println!("{name:<7} {about}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { preset: name, config, trials, iters, seed, threads, out, svg } => {
            match run(name, config, trials, iters, seed, threads, out, svg) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(if e.is_usage() { EXIT_USAGE } else { EXIT_RUN })
                }
            }
        }
        Command::Verify { quick, seed, threads, fault_pdf_scale } => {
            let opts = VerifyOptions {
                quick,
                seed,
                threads: threads.unwrap_or(RunOptions::default().threads),
                pdf_scale: fault_pdf_scale,
            };
            let reports = verify::run(&opts);
            for r in &reports {
                print!("{r}");
            }
            if reports.iter().all(|r| r.passed) {
                println!("all suites passed");
                ExitCode::SUCCESS
            } else {
                println!("verification FAILED");
                ExitCode::from(EXIT_VERIFY)
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    name: Option<String>,
    config: Option<PathBuf>,
    trials: Option<usize>,
    iters: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: PathBuf,
    svg: Option<PathBuf>,
) -> Result<(), LabError> {
    let mut spec = match (name, config) {
        (Some(n), _) => preset(&n)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| LabError::InvalidSpec(format!("{}: {e}", path.display())))?;
            ExperimentSpec::from_json(&text)?
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    if let Some(t) = trials {
        spec.trials = t;
    }
    if let Some(t) = iters {
        spec.iters = t;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    if threads == Some(0) {
        return Err(LabError::InvalidSpec("threads must be at least 1".into()));
    }
    let opts = threads.map_or_else(RunOptions::default, |threads| RunOptions { threads });
    let started = Instant::now();
    let result = run_experiment(&spec, opts)?;
    write_csv(&result, &out)?;
    let meta = write_meta(&result, &out)?;
    if let Some(path) = &svg {
        plot_svg(&result, path)?;
    }
    for s in &result.series {
        let last = s.stats.mean.last().copied().unwrap_or(f64::NAN);
        eprintln!("{:<28} final mean gap {last:.3e}  trials {}  aborted {}", s.label, s.stats.trials, s.aborted);
    }
    eprintln!(
        "wrote {} and {} in {:.1}s on {} threads",
        out.display(),
        meta.display(),
        started.elapsed().as_secs_f64(),
        result.threads
    );
    Ok(())
}
