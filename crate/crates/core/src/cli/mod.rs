//! Configuration-driven entry point. `riskfront run --config run.toml`
//! executes the configured problem or benchmark and writes its outputs;
//! `riskfront validate --config run.toml` only checks the config.
//!
//! Exit codes: 0 success (budget stops included), 1 I/O failure,
//! 2 configuration error, 3 numerical failure.

mod config;
mod output;

pub use config::{
    locate_key, parse_config, to_toml, BenchmarkSection, DistributionSpec, EnvSection, GpObjective, GpSection,
    GridSpec, NoiseSpec, ObjectiveSection, OutputFormat, OutputSection, ProblemSection, RunConfig,
};
pub use output::{
    benchmark_summary, curves_csv, fmt_f64, history_csv, pareto_csv, run_summary, to_json, BenchmarkSummary,
    MethodSummary, RunSummary, TrialSummary, HISTORY_HEADER,
};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::benchmarks::{build_truth, desk_problem, replicate_problem, BenchmarkError, ExperimentResult};
use crate::optimizer::{OptimizerError, RunHistory};
use crate::rng::mix;

/// A config problem with the offending field and line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error")?;
        if let Some(l) = self.line {
            write!(f, " at line {l}")?;
        }
        if let Some(k) = &self.field {
            write!(f, " in field `{k}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("run failed: {0}")]
    Run(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Run(_) => 3,
        }
    }
}

impl From<OptimizerError> for CliError {
    fn from(e: OptimizerError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else if let OptimizerError::Config(m) = e {
            CliError::Config(ConfigError {
                field: None,
                line: None,
                message: m,
            })
        } else {
            CliError::Run(e.to_string())
        }
    }
}

impl From<BenchmarkError> for CliError {
    fn from(e: BenchmarkError) -> Self {
        match e {
            BenchmarkError::Optimizer(o) => o.into(),
            BenchmarkError::Gp(g) => OptimizerError::Gp(g).into(),
            other => CliError::Run(other.to_string()),
        }
    }
}

/// Results of the configured work, before anything is written.
#[derive(Debug, Clone)]
pub enum RunResult {
    Problem {
        seeds: Vec<u64>,
        histories: Vec<RunHistory>,
        n_risks: usize,
    },
    Benchmark(ExperimentResult),
}

/// Runs every trial of a problem config (in parallel, trial `t` seeded
/// with `mix(seed, t)`) or the configured benchmark.
pub fn execute(config: &RunConfig) -> Result<RunResult, CliError> {
    if let Some(b) = &config.benchmark {
        let problem = Arc::new(desk_problem(b.experiment, b.budget)?);
        let r = replicate_problem(b.experiment.as_str(), problem, &b.methods, config.trials, config.seed)?;
        return Ok(RunResult::Benchmark(r));
    }
    let problem = Arc::new(config.problem_spec()?);
    let truth = if config.output.truth {
        Some(Arc::new(build_truth(&problem)?))
    } else {
        None
    };
    let seeds: Vec<u64> = (0..config.trials as u64).map(|t| mix(config.seed, t)).collect();
    let histories = seeds
        .par_iter()
        .map(|&s| config.method.run(problem.clone(), s, truth.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunResult::Problem {
        seeds,
        histories,
        n_risks: problem.n_risks(),
    })
}

fn write(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let p = dir.join(name);
    fs::write(&p, body)?;
    written.push(p);
    Ok(())
}

/// Writes the outputs of `result` under `dir` and returns the file list.
/// Wall time goes to `timing.json`, so the other files are reproducible.
pub fn write_outputs(
    config: &RunConfig,
    result: &RunResult,
    dir: &Path,
    wall_seconds: f64,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let csv = config.output.formats.contains(&OutputFormat::Csv);
    let json = config.output.formats.contains(&OutputFormat::Json);
    let mut written = Vec::new();
    match result {
        RunResult::Problem {
            seeds,
            histories,
            n_risks,
        } => {
            if csv {
                write(dir, "history.csv", &history_csv(histories), &mut written)?;
                write(dir, "pareto.csv", &pareto_csv(histories, *n_risks), &mut written)?;
            }
            if json {
                let summary = run_summary(config.method.name(), config.seed, seeds, histories);
                write(dir, "summary.json", &to_json(&summary), &mut written)?;
            }
        }
        RunResult::Benchmark(r) => {
            for m in &r.methods {
                let sub = dir.join(&m.method);
                fs::create_dir_all(&sub)?;
                if csv {
                    write(&sub, "curves.csv", &curves_csv(m), &mut written)?;
                    write(&sub, "history.csv", &history_csv(&m.histories), &mut written)?;
                }
            }
            if json {
                write(dir, "summary.json", &to_json(&benchmark_summary(r)), &mut written)?;
            }
        }
    }
    if json {
        let timing = serde_json::json!({ "wall_seconds": wall_seconds });
        write(dir, "timing.json", &to_json(&timing), &mut written)?;
    }
    Ok(written)
}

#[derive(Debug, Parser)]
#[command(name = "riskfront", version, about = "Pareto front identification for risk measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured problem or benchmark and write outputs.
    Run(RunArgs),
    /// Parse and validate a config, printing its normalized form.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `trials`.
    #[arg(long)]
    pub trials: Option<usize>,
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError {
        field: None,
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(parse_config(&text)?)
}

/// Applies the command-line overrides, runs and writes outputs.
pub fn run_command(args: &RunArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut config = load(&args.config)?;
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(o) = &args.out {
        config.output.directory = o.to_string_lossy().into_owned();
    }
    config.validate()?;
    let start = Instant::now();
    let result = execute(&config)?;
    let wall = start.elapsed().as_secs_f64();
    write_outputs(&config, &result, Path::new(&config.output.directory), wall)
}

/// Process entry point; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => run_command(a).map(|files| {
            for f in files {
                println!("{}", f.display());
            }
        }),
        Command::Validate { config } => load(config).map(|c| print!("{}", to_toml(&c))),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
