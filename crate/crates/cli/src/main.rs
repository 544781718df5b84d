//! `gaugebench`: command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on usage errors, 2 when a
//! computation disagrees with its expected value.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use commands::{adhm, bundles, localize, moduli, nekrasov, twistor, verify};

#[derive(Parser)]
#[command(name = "gaugebench", version, about = "Numerical and exact checks for instantons, twistors, bundles and localization")]
struct Cli {
    /// JSON file with defaults for the global options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for Monte Carlo commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "GAUGEBENCH_THREADS")]
    threads: Option<usize>,
    /// Output format; `csv` only for grid fields.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Include wall-clock time in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// ADHM instantons: field strength, charge and action on grids.
    Adhm(adhm::Args),
    /// Contour-integral (Bateman) transform and the Laplace equation.
    Twistor(twistor::Args),
    /// Bundles on curves and line bundles on projective space.
    Bundles(bundles::Args),
    /// Poincaré series of rank-2 moduli spaces and their splitting.
    Moduli(moduli::Args),
    /// Fixed-point formulas for circle actions.
    Localize(localize::Args),
    /// Instanton counting and Seiberg–Witten periods.
    Nekrasov(nekrasov::Args),
    /// Run the acceptance suite.
    Verify(verify::Args),
}

/// Keys of the `--config` file; flags take precedence.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    output: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    format: Option<Format>,
    #[serde(default)]
    timing: bool,
    #[serde(default)]
    tolerances: std::collections::BTreeMap<String, f64>,
    scale: Option<String>,
}

/// Options shared by every subcommand after merging flags and config.
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub timing: bool,
    pub tolerances: std::collections::BTreeMap<String, f64>,
    pub scale: Option<String>,
    pub output: Option<PathBuf>,
}

pub enum Failure {
    Usage { message: String, hint: String },
    Io(String),
}

impl Failure {
    pub fn usage(message: impl std::fmt::Display, hint: impl Into<String>) -> Self {
        Failure::Usage { message: message.to_string(), hint: hint.into() }
    }
}

pub enum Outcome {
    Report(report::RunReport),
    /// Already written (CSV); carries the pass flag.
    Written(bool),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage { message, hint }) => {
            eprintln!("error: {message}\nhint: {hint}");
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display()), "check the --config path"))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display()), "config keys: output, seed, threads, format, timing, tolerances, scale"))?
        }
        None => FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        if n == 0 {
            return Err(Failure::usage("--threads must be positive", "omit --threads to use every core"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let cfg = RunConfig {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        timing: cli.timing || file.timing,
        tolerances: file.tolerances,
        scale: file.scale,
        output: cli.output.or(file.output),
    };
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Adhm(a) => adhm::run(a, &cfg),
        Command::Twistor(a) => twistor::run(a, &cfg),
        Command::Bundles(a) => bundles::run(a, &cfg),
        Command::Moduli(a) => moduli::run(a, &cfg),
        Command::Localize(a) => localize::run(a, &cfg),
        Command::Nekrasov(a) => nekrasov::run(a, &cfg),
        Command::Verify(a) => verify::run(a, &cfg),
    }?;
    match outcome {
        Outcome::Written(ok) => Ok(ok),
        Outcome::Report(mut r) => {
            if cfg.timing {
                r.seconds = Some(start.elapsed().as_secs_f64());
            }
            let text = serde_json::to_string(&r).map_err(|e| Failure::Io(e.to_string()))?;
            report::emit(&text, cfg.output.as_deref()).map_err(|e| Failure::Io(e.to_string()))?;
            Ok(r.passed)
        }
    }
}
