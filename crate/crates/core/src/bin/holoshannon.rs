use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use holoshannon::acceptance::{run_acceptance, timing_failures, DEFAULT_SEED};
use holoshannon::runner::{run_scenario_with, sweep, RunOptions};
use holoshannon::scenario::{Scenario, ScenarioError};

#[derive(Parser)]
#[command(name = "holoshannon", version, about = "Coherence entropy versus holographic complexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every pipeline of one scenario.
    Run {
        #[command(flatten)]
        common: Common,
        /// Include wall-clock timings (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Rerun a scenario over several values of one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Dotted scenario path, e.g. `geometry.l` or `fluid.u`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Run the acceptance suite.
    Check {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file; the built-in ground state when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reject the marginal velocity regime too.
    #[arg(long)]
    strict_regime: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn load(&self) -> Result<Scenario, ScenarioError> {
        let mut s = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::ground(),
        };
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if self.strict_regime {
            s.regime.strict = true;
        }
        Ok(s)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                _ => Ok(()),
            }
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { common, timings } => {
            let scenario = match common.load() {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            let report = run_scenario_with(&scenario, RunOptions { timings });
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            if let Err(e) = emit(common.out.as_deref(), &text) {
                return config_error(e);
            }
            for c in report.failures() {
                eprintln!("FAIL {}/{}{}", c.group, c.name, c.note.as_deref().map(|n| format!(": {n}")).unwrap_or_default());
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let scenario = match common.load() {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            let (table, reports) = match sweep(&scenario, &param, &values) {
                Ok(t) => t,
                Err(e) => return config_error(e),
            };
            let text = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            if let Err(e) = emit(common.out.as_deref(), text.trim_end()) {
                return config_error(e);
            }
            if reports.iter().all(|r| r.all_passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Check { seed, out } => {
            let (report, timings) = run_acceptance(seed);
            for c in &report.criteria {
                println!("{}", c.line());
            }
            let slow = timing_failures(&timings);
            for s in &slow {
                println!("[SLOW] {s}");
            }
            eprintln!("suite time: {:.2}s", timings.total);
            if let Some(path) = out {
                if let Err(e) = emit(Some(&path), &report.to_json()) {
                    return config_error(e);
                }
            }
            if report.all_passed() && slow.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
