//! `grainsort` command-line front-end.

mod artifacts;
mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grainsort::features::MethodTag;

use crate::commands::EvaluateOptions;
use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "grainsort", version, about = "Simulate radar grain surfaces and classify them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ConfigArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a labelled dataset.
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// SNR in dB, or `clean`; defaults to the first configured value.
        #[arg(long, value_parser = parse_snr)]
        snr: Option<Option<f64>>,
    },
    /// Extract one feature set from a dataset file.
    Extract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: MethodTag,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Defaults to the input's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a classifier on one feature set.
    Train {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, value_parser = parse_method)]
        method: MethodTag,
        /// Dataset file; simulated from the config when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Classify a dataset file with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the model's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate every configured method at every configured SNR.
    Evaluate {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Restrict to these methods.
        #[arg(long, value_parser = parse_method)]
        method: Vec<MethodTag>,
        /// Replace the configured SNR list.
        #[arg(long, value_parser = parse_snr)]
        snr: Vec<Option<f64>>,
        /// Score folds with the true labels instead of a classifier.
        #[arg(long)]
        echo: bool,
        /// Pick C and gamma per method from the configured grid.
        #[arg(long)]
        grid: bool,
    },
    /// Re-render the tables from a saved summary.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_method(s: &str) -> Result<MethodTag, String> {
    s.parse()
}

fn parse_snr(s: &str) -> Result<Option<f64>, String> {
    if s.eq_ignore_ascii_case("clean") {
        return Ok(None);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(format!("expected a finite number of dB or `clean`, got {s:?}")),
    }
}

fn parent_dir(p: &Path) -> PathBuf {
    p.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GRAINSORT_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("GRAINSORT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Simulate { cfg, snr } => {
            let cfg = cfg.load()?;
            let snr = snr.unwrap_or(cfg.snr_db[0]);
            commands::simulate(&cfg, snr)?;
        }
        Command::Extract { input, method, config, out } => {
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            commands::extract(cfg.as_ref(), &input, method, &out.unwrap_or_else(|| parent_dir(&input)))?;
        }
        Command::Train { cfg, method, input } => {
            commands::train(&cfg.load()?, input.as_deref(), method)?;
        }
        Command::Predict { model, input, out } => {
            let out = out.unwrap_or_else(|| parent_dir(&model));
            commands::predict(&model, &input, &out)?;
        }
        Command::Evaluate { cfg, method, snr, echo, grid } => {
            let mut cfg = cfg.load()?;
            if !method.is_empty() {
                cfg.methods = method;
            }
            if !snr.is_empty() {
                cfg.snr_db = snr;
            }
            commands::evaluate(&cfg, &EvaluateOptions { echo, grid })?;
        }
        Command::Report { input, out } => {
            let out = out.unwrap_or_else(|| parent_dir(&input));
            commands::report(&input, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
