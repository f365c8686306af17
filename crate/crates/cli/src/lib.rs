//! Command-line harness for truncated-QFT phase estimation experiments.
//!
//! Every subcommand turns a parameter sweep into a CSV or JSON report. See
//! [`sweep`] for the list and range syntax accepted by sweep flags.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod output;
pub mod suite;
pub mod sweep;

use commands::{
    CliffArgs, CrossoverArgs, GatesArgs, PlanArgs, PlatformsArgs, RmseArgs, TfimArgs, TvdArgs,
};
pub use error::{exit, CliError};
use output::{Destination, Format};

#[derive(Debug, Parser)]
#[command(
    name = "pfa-tqft",
    version,
    about = "Truncated-QFT phase estimation experiments"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (`-` for stdout). Defaults to $PFA_TQFT_OUT_DIR/<command>.<ext>
    /// when that variable is set, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum TVD between full and truncated QPE against the analytic bounds.
    Tvd(TvdArgs),
    /// Controlled-phase gate counts.
    Gates(GatesArgs),
    /// Success probability as a function of depth.
    Cliff(CliffArgs),
    /// Depth selection and gate savings per hardware platform.
    Platforms(PlatformsArgs),
    /// Three-term RMSE model.
    Rmse(RmseArgs),
    /// Error rate above which truncation lowers the RMSE.
    Crossover(CrossoverArgs),
    /// Ising-chain spectrum, or energy estimation runs when --m is given.
    Tfim(TfimArgs),
    /// Circuit in plan text format.
    Plan(PlanArgs),
    /// Runs the default experiment set into a directory.
    Suite {
        /// Target directory. Defaults to $PFA_TQFT_OUT_DIR, else `results`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tvd(_) => "tvd",
            Command::Gates(_) => "gates",
            Command::Cliff(_) => "cliff",
            Command::Platforms(_) => "platforms",
            Command::Rmse(_) => "rmse",
            Command::Crossover(_) => "crossover",
            Command::Tfim(_) => "tfim",
            Command::Plan(_) => "plan",
            Command::Suite { .. } => "suite",
        }
    }
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let name = cli.command.name();
    let outcome = match &cli.command {
        Command::Tvd(a) => commands::tvd(a)?,
        Command::Gates(a) => commands::gates(a)?,
        Command::Cliff(a) => commands::cliff(a)?,
        Command::Platforms(a) => commands::platforms(a)?,
        Command::Rmse(a) => commands::rmse(a)?,
        Command::Crossover(a) => commands::crossover(a)?,
        Command::Tfim(a) => commands::tfim(a)?,
        Command::Plan(a) => {
            let text = commands::plan(a)?;
            let dest = match &cli.out {
                Some(p) if p.as_os_str() != "-" => Destination::File(p.clone()),
                _ => Destination::Stdout,
            };
            let config = serde_json::json!({ "m": a.m, "d": a.d });
            output::emit(
                &dest,
                &text,
                &output::run_meta(name, &config, start.elapsed()),
            )?;
            return Ok(exit::OK);
        }
        Command::Suite { out_dir } => {
            let dir = out_dir
                .clone()
                .or_else(|| {
                    std::env::var_os(output::OUT_DIR_ENV)
                        .filter(|d| !d.is_empty())
                        .map(PathBuf::from)
                })
                .unwrap_or_else(|| PathBuf::from("results"));
            let summary = suite::run_suite(&dir, cli.format)?;
            for f in &summary.files {
                log::info!("wrote {}", f.display());
            }
            return finish(&summary.violations);
        }
    };
    let dest = Destination::resolve(cli.out.as_deref(), name, cli.format);
    let text = outcome.report.render(cli.format)?;
    let meta = output::run_meta(name, &outcome.report.config, start.elapsed());
    output::emit(&dest, &text, &meta)?;
    finish(&outcome.violations)
}

fn finish(violations: &[String]) -> Result<i32, CliError> {
    if violations.is_empty() {
        Ok(exit::OK)
    } else {
        for v in violations {
            log::error!("{v}");
        }
        Err(CliError::Violation(format!(
            "{} bound violation(s); first: {}",
            violations.len(),
            violations[0]
        )))
    }
}
