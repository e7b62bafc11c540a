//! `lpboot`: coverage studies and single-series impulse response inference
//! for AR(1) local projections with bootstrap confidence intervals.

mod config;
mod error;
mod infer;
mod ingest;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use lpboot_core::{run_study, IntervalMethod};

use crate::config::{load_study_config, StudyOverrides};
use crate::error::Result;
use crate::infer::{run_infer, InferParams};

#[derive(Parser)]
#[command(name = "lpboot", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo coverage study from a JSON config file.
    Study {
        /// Path to the JSON study configuration.
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (overrides LPBOOT_THREADS and the config file).
        #[arg(long)]
        threads: Option<usize>,
        /// Base seed (overrides the config file).
        #[arg(long)]
        seed: Option<u64>,
        /// Force full-scale replication parameters (R = 5000, B = 1000).
        /// A long-running job; not meant for CI.
        #[arg(long)]
        paper_scale: bool,
    },
    /// Impulse response intervals for one ingested CSV series.
    Infer {
        /// Input CSV file with a header row.
        #[arg(long)]
        input: PathBuf,
        /// Column holding the series.
        #[arg(long)]
        column: String,
        /// Comma-separated horizons, e.g. 1,6,12.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        /// One minus the nominal level.
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        /// Interval methods (repeat or comma-separate); defaults to all
        /// eight.
        #[arg(long = "method", value_delimiter = ',')]
        methods: Vec<String>,
        /// Bootstrap draws per scheme.
        #[arg(long = "b", default_value_t = 1000)]
        b: usize,
        /// Seed of the bootstrap streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subtract the sample mean before fitting. The estimator assumes a
        /// mean-zero process, so this changes the estimand; off by default.
        #[arg(long)]
        demean: bool,
        /// Write machine-readable CSV here.
        #[arg(long)]
        output_csv: Option<PathBuf>,
        /// Write a JSON mirror here.
        #[arg(long)]
        output_json: Option<PathBuf>,
    },
}

fn main() {
    match run(Cli::parse()) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Study {
            config,
            threads,
            seed,
            paper_scale,
        } => {
            let (cfg, output) = load_study_config(
                &config,
                StudyOverrides {
                    seed,
                    threads,
                    paper_scale,
                },
            )?;
            let report = run_study(&cfg)?;
            report::write_if_some(output.csv.as_deref(), &report::study_csv(&report)?)?;
            report::write_if_some(output.json.as_deref(), &report::study_json(&report)?)?;
            if output.table {
                print!("{}", report::render_study_table(&report, 1.0 - cfg.alpha)?);
            }
            Ok(())
        }
        Command::Infer {
            input,
            column,
            horizons,
            alpha,
            methods,
            b,
            seed,
            demean,
            output_csv,
            output_json,
        } => {
            let methods = parse_methods(&methods)?;
            let mut series = ingest::ingest_csv(&input, &column)?;
            if demean {
                series = ingest::demean(&series);
            }
            let params = InferParams {
                horizons,
                alpha,
                methods,
                bootstrap_b: b,
                seed,
            };
            let result = run_infer(&series, &params)?;
            report::write_if_some(output_csv.as_deref(), &report::infer_csv(&result)?)?;
            report::write_if_some(output_json.as_deref(), &report::infer_json(&result)?)?;
            print!("{}", report::render_infer_table(&result)?);
            Ok(())
        }
    }
}

fn parse_methods(names: &[String]) -> Result<Vec<IntervalMethod>> {
    if names.is_empty() {
        return Ok(lpboot_core::intervals::ALL_METHODS.to_vec());
    }
    names
        .iter()
        .map(|name| name.parse::<IntervalMethod>().map_err(Into::into))
        .collect()
}
