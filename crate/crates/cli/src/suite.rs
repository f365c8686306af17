//! The default experiment set, written as one file per experiment.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::commands::{
    self, CliffArgs, CrossoverArgs, GatesArgs, ModeArg, Outcome, PlatformsArgs, RmseArgs, TfimArgs,
    TvdArgs,
};
use crate::error::CliError;
use crate::output::{self, Format};

fn arg<T: std::str::FromStr>(s: &str) -> T
where
    T::Err: std::fmt::Debug,
{
    s.parse().expect("suite defaults parse")
}

type Experiment = (
    &'static str,
    Box<dyn Fn() -> Result<Outcome, CliError> + Sync>,
);

fn experiments() -> Vec<Experiment> {
    vec![
        (
            "tvd",
            Box::new(|| {
                commands::tvd(&TvdArgs {
                    m: arg("4..10"),
                    d: arg("all"),
                    phases: 500,
                    grid: 4096,
                    seed: 42,
                })
            }),
        ),
        (
            "gates",
            Box::new(|| {
                commands::gates(&GatesArgs {
                    m: arg("8,16,20,30,50"),
                    d: arg("all"),
                })
            }),
        ),
        (
            "cliff",
            Box::new(|| {
                commands::cliff(&CliffArgs {
                    m: arg("4..12"),
                    d: arg("all"),
                    mode: ModeArg::Exact,
                    shots: 1000,
                    seed: 42,
                    phases: arg("grid:256"),
                })
            }),
        ),
        (
            "cliff_sampled",
            Box::new(|| {
                commands::cliff(&CliffArgs {
                    m: arg("8"),
                    d: arg("all"),
                    mode: ModeArg::Sampled,
                    shots: 1000,
                    seed: 42,
                    phases: arg("random:64"),
                })
            }),
        ),
        (
            "platforms",
            Box::new(|| {
                commands::platforms(&PlatformsArgs {
                    m: 30,
                    platforms: None,
                })
            }),
        ),
        (
            "rmse",
            Box::new(|| {
                commands::rmse(&RmseArgs {
                    m: arg("12,16,20"),
                    d: arg("11,full"),
                    eps: arg("1e-4..1e-2:log9"),
                    c: 0.033,
                })
            }),
        ),
        (
            "crossover",
            Box::new(|| {
                commands::crossover(&CrossoverArgs {
                    m: 16,
                    d: 11,
                    c: 0.033,
                    tv: None,
                    gates_full: None,
                    gates: None,
                })
            }),
        ),
        (
            "tfim_spectrum",
            Box::new(|| commands::tfim(&tfim_args(None))),
        ),
        (
            "tfim_qpe",
            Box::new(|| commands::tfim(&tfim_args(Some("8,12,16,20")))),
        ),
    ]
}

fn tfim_args(m: Option<&str>) -> TfimArgs {
    TfimArgs {
        n: 4,
        coupling: 1.0,
        field: 0.5,
        spectrum: 16,
        m: m.map(arg),
        d: arg("6,full"),
        level: arg("0,2"),
        eps: 1e-3,
        c: 0.033,
        mode: ModeArg::Exact,
        shots: 10_000,
        seed: 42,
    }
}

/// Names of the files the suite writes, without extension.
pub fn experiment_names() -> Vec<&'static str> {
    experiments().into_iter().map(|(name, _)| name).collect()
}

#[derive(Debug, Clone)]
pub struct SuiteSummary {
    pub files: Vec<PathBuf>,
    pub violations: Vec<String>,
}

/// Runs every experiment and writes `<dir>/<name>.<ext>`, plus
/// `suite.meta.json` with per-experiment runtimes.
pub fn run_suite(dir: &Path, format: Format) -> Result<SuiteSummary, CliError> {
    let mut files = Vec::new();
    let mut violations = Vec::new();
    let mut timings = Map::new();
    let start = Instant::now();
    for (name, run) in experiments() {
        let t0 = Instant::now();
        let outcome = run()?;
        let elapsed = t0.elapsed().as_secs_f64();
        log::info!(
            "{name}: {} rows in {elapsed:.2} s",
            outcome.report.rows.len()
        );
        timings.insert(name.to_string(), json!(elapsed));
        let path = dir.join(format!("{name}.{}", format.extension()));
        output::write_file(&path, &outcome.report.render(format)?)?;
        files.push(path);
        violations.extend(
            outcome
                .violations
                .into_iter()
                .map(|v| format!("{name}: {v}")),
        );
    }
    let meta = json!({
        "tool": output::TOOL,
        "version": output::VERSION,
        "command": "suite",
        "runtime_s": start.elapsed().as_secs_f64(),
        "experiments": Value::Object(timings),
    });
    output::write_file(
        &dir.join("suite.meta.json"),
        &(serde_json::to_string_pretty(&meta).expect("meta is valid JSON") + "\n"),
    )?;
    Ok(SuiteSummary { files, violations })
}
