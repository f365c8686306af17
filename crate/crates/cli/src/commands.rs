//! One function per subcommand, each turning parsed arguments into a
//! [`Report`]. Rows come out in sweep order regardless of how the work was
//! scheduled.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use pfa_tqft::calibration::{
    cliff_depth, crossover_eps, crossover_eps_from_inputs, platform_report, rmse_model, tvd_bound,
    BoundForm, Depth, PlatformRegistry, DEFAULT_NOISE_CONSTANT,
};
use pfa_tqft::qft::{full_gate_count, gate_count, plan_pfa_tqft};
use pfa_tqft::qpe::{
    max_tvd_profile, phase_distribution, success_probability_of, EvalMode, PhaseSampling,
};
use pfa_tqft::tfim::{qpe_energy_experiment_with_spectrum, spectrum, QpeSettings, TfimSpec};

use crate::error::CliError;
use crate::output::Report;
use crate::sweep::{FloatSweep, IntSweep, PhaseSpec};

/// Largest register accepted by `tvd`.
pub const MAX_TVD_QUBITS: usize = 12;

/// A report plus any bound violations found while producing it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub violations: Vec<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            report,
            violations: Vec::new(),
        }
    }
}

fn reduction_pct(gates: u64, gates_full: u64) -> f64 {
    if gates_full == 0 {
        0.0
    } else {
        100.0 * (1.0 - gates as f64 / gates_full as f64)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TvdArgs {
    /// Register sizes.
    #[arg(long, default_value = "4..10")]
    pub m: IntSweep,
    /// Truncation depths (`all`, `full`, lists, ranges).
    #[arg(long, default_value = "all")]
    pub d: IntSweep,
    /// Number of seeded random phases.
    #[arg(long, default_value_t = 500)]
    pub phases: usize,
    /// Number of grid phases (cell midpoints).
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Maximum TVD against both bound forms. A row whose maximum exceeds the
/// tight bound is reported as a violation.
pub fn tvd(args: &TvdArgs) -> Result<Outcome, CliError> {
    let ms = args.m.values()?;
    if let Some(&m) = ms.iter().find(|&&m| m == 0 || m > MAX_TVD_QUBITS) {
        return Err(CliError::Usage(format!(
            "tvd needs 1 <= m <= {MAX_TVD_QUBITS}, got {m}"
        )));
    }
    let sampling = PhaseSampling {
        random: args.phases,
        seed: args.seed,
        grid: args.grid,
    };
    let mut report = Report::new(
        "tvd",
        json!({
            "m": ms,
            "d": args.d.to_string(),
            "phases": args.phases,
            "grid": args.grid,
            "seed": args.seed,
        }),
    );
    let mut violations = Vec::new();
    for &m in &ms {
        let depths = args.d.depths(m)?;
        for row in max_tvd_profile(m, &depths, &sampling)? {
            let tight = tvd_bound(m, row.d, BoundForm::Tight)?;
            let loose = tvd_bound(m, row.d, BoundForm::Loose)?;
            let ratio = if loose > 0.0 {
                row.value / loose
            } else {
                f64::NAN
            };
            if row.value > tight {
                violations.push(format!(
                    "m={m} d={}: max TV {} exceeds bound {tight} at phase {}",
                    row.d, row.value, row.phase
                ));
            }
            report.push(json!({
                "m": m,
                "d": row.d,
                "max_tv": row.value,
                "bound_tight": tight,
                "bound_loose": loose,
                "ratio": ratio,
                "worst_phase": row.phase,
            }));
        }
    }
    Ok(Outcome { report, violations })
}

#[derive(Debug, Clone, Args)]
pub struct GatesArgs {
    #[arg(long, default_value = "30")]
    pub m: IntSweep,
    #[arg(long, default_value = "all")]
    pub d: IntSweep,
}

pub fn gates(args: &GatesArgs) -> Result<Outcome, CliError> {
    let ms = args.m.values()?;
    let mut report = Report::new("gates", json!({ "m": ms, "d": args.d.to_string() }));
    for &m in &ms {
        let gates_full = full_gate_count(m);
        for d in args.d.depths(m)? {
            let g = gate_count(m, d)?;
            report.push(json!({
                "m": m,
                "d": d,
                "gates": g,
                "gates_full": gates_full,
                "reduction_pct": reduction_pct(g, gates_full),
            }));
        }
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Exact => "exact",
            ModeArg::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CliffArgs {
    #[arg(long, default_value = "8")]
    pub m: IntSweep,
    #[arg(long, default_value = "all")]
    pub d: IntSweep,
    /// `exact` leaves `success_sampled` empty.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Phase sampling (`grid:N`, `random:N`).
    #[arg(long, default_value = "grid:256")]
    pub phases: PhaseSpec,
}

/// Mean success probability per `(m, d)`. Sampled runs draw task `i`
/// (phase `i` of row `r`) from seed `seed + r * phases + i`.
pub fn cliff(args: &CliffArgs) -> Result<Outcome, CliError> {
    let ms = args.m.values()?;
    if args.mode == ModeArg::Sampled && args.shots == 0 {
        return Err(CliError::Usage("shots must be positive".into()));
    }
    let phases = args.phases.sampling(args.seed).phases()?;
    let mut report = Report::new(
        "cliff",
        json!({
            "m": ms,
            "d": args.d.to_string(),
            "mode": args.mode.name(),
            "shots": args.shots,
            "seed": args.seed,
            "phases": args.phases.to_string(),
        }),
    );
    let mut task_base = 0u64;
    for &m in &ms {
        let marker = cliff_depth(m)?;
        for d in args.d.depths(m)? {
            let per_phase = phases
                .par_iter()
                .enumerate()
                .map(|(i, &phi)| {
                    let dist = phase_distribution(phi, m, d)?;
                    let exact = success_probability_of(&dist, phi, EvalMode::Exact)?;
                    let sampled = match args.mode {
                        ModeArg::Exact => None,
                        ModeArg::Sampled => {
                            let seed = args.seed.wrapping_add(task_base).wrapping_add(i as u64);
                            let mode = EvalMode::Sampled {
                                shots: args.shots,
                                seed,
                            };
                            Some(success_probability_of(&dist, phi, mode)?)
                        }
                    };
                    Ok((exact, sampled))
                })
                .collect::<Result<Vec<_>, pfa_tqft::Error>>()?;
            task_base = task_base.wrapping_add(phases.len() as u64);
            let count = per_phase.len() as f64;
            let mean = per_phase.iter().map(|p| p.0).sum::<f64>() / count;
            let min = per_phase.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let sampled = match args.mode {
                ModeArg::Exact => Value::Null,
                ModeArg::Sampled => {
                    json!(per_phase.iter().filter_map(|p| p.1).sum::<f64>() / count)
                }
            };
            report.push(json!({
                "m": m,
                "d": d,
                "success_exact": mean,
                "success_exact_min": min,
                "success_sampled": sampled,
                "cliff_depth_marker": marker,
            }));
        }
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Args)]
pub struct PlatformsArgs {
    #[arg(long, default_value_t = 30)]
    pub m: usize,
    /// CSV registry (`name,eps_2q`) replacing the built-in platforms.
    #[arg(long)]
    pub platforms: Option<PathBuf>,
}

pub fn platforms(args: &PlatformsArgs) -> Result<Outcome, CliError> {
    let (registry, source) = match &args.platforms {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::io(path.display(), e))?;
            (
                PlatformRegistry::from_reader(file)?,
                path.display().to_string(),
            )
        }
        None => (PlatformRegistry::builtin(), "builtin".to_string()),
    };
    let mut report = Report::new("platforms", json!({ "m": args.m, "platforms": source }));
    for row in platform_report(&registry, args.m)? {
        report.push(json!({
            "name": row.name,
            "eps_2q": row.eps_2q,
            "d_star": row.d_star,
            "depth": row.depth,
            "gates": row.gates,
            "gates_full": row.gates_full,
            "reduction_pct": row.reduction_pct,
            "full_qft": row.full_qft,
        }));
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Args)]
pub struct RmseArgs {
    #[arg(long, default_value = "16")]
    pub m: IntSweep,
    /// Depths; `full` selects the untruncated budget (TV = 0).
    #[arg(long, default_value = "11,full")]
    pub d: IntSweep,
    /// Two-qubit error rates.
    #[arg(long, default_value = "1e-4..1e-2:log9")]
    pub eps: FloatSweep,
    /// Noise constant.
    #[arg(long, default_value_t = DEFAULT_NOISE_CONSTANT)]
    pub c: f64,
}

pub fn rmse(args: &RmseArgs) -> Result<Outcome, CliError> {
    let ms = args.m.values()?;
    let mut report = Report::new(
        "rmse",
        json!({
            "m": ms,
            "d": args.d.to_string(),
            "eps": args.eps.values(),
            "c": args.c,
        }),
    );
    for &m in &ms {
        for depth in args.d.depth_labels(m)? {
            for &eps in args.eps.values() {
                let b = rmse_model(m, depth, eps, args.c)?;
                report.push(json!({
                    "m": m,
                    "depth": b.depth,
                    "full": depth == Depth::Full,
                    "eps_2q": eps,
                    "c": args.c,
                    "gates": b.gates,
                    "tv": b.tv,
                    "precision_term": b.precision_term,
                    "truncation_term": b.truncation_term,
                    "noise_term": b.noise_term,
                    "rmse": b.rmse,
                }));
            }
        }
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Args)]
pub struct CrossoverArgs {
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 11)]
    pub d: usize,
    #[arg(long, default_value_t = DEFAULT_NOISE_CONSTANT)]
    pub c: f64,
    /// Explicit truncation error; requires `--gates-full` and `--gates`.
    #[arg(long, requires_all = ["gates_full", "gates"])]
    pub tv: Option<f64>,
    #[arg(long, requires_all = ["tv", "gates"])]
    pub gates_full: Option<f64>,
    #[arg(long, requires_all = ["tv", "gates_full"])]
    pub gates: Option<f64>,
}

/// Crossover rate with its inputs. Explicit `--tv/--gates-full/--gates`
/// override the values derived from `(m, d)`.
pub fn crossover(args: &CrossoverArgs) -> Result<Outcome, CliError> {
    let mut report;
    match (args.tv, args.gates_full, args.gates) {
        (Some(tv), Some(gf), Some(g)) => {
            report = Report::new(
                "crossover",
                json!({ "tv": tv, "gates_full": gf, "gates": g, "c": args.c }),
            );
            let eps = crossover_eps_from_inputs(tv, gf, g, args.c)?;
            report.push(json!({
                "m": Value::Null,
                "d": Value::Null,
                "c": args.c,
                "tv": tv,
                "gates_full": gf,
                "gates": g,
                "eps_cross": eps,
            }));
        }
        (None, None, None) => {
            report = Report::new(
                "crossover",
                json!({ "m": args.m, "d": args.d, "c": args.c }),
            );
            let x = crossover_eps(args.m, args.d, args.c)?;
            report.push(json!({
                "m": x.m,
                "d": x.d,
                "c": x.c,
                "tv": x.tv,
                "gates_full": x.gates_full,
                "gates": x.gates,
                "eps_cross": x.eps_cross,
            }));
        }
        _ => {
            return Err(CliError::Usage(
                "--tv, --gates-full and --gates must be given together".into(),
            ))
        }
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Args)]
pub struct TfimArgs {
    /// Chain length.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Ising coupling.
    #[arg(long = "J", default_value_t = 1.0)]
    pub coupling: f64,
    /// Transverse field.
    #[arg(long = "h", default_value_t = 0.5)]
    pub field: f64,
    /// Number of lowest eigenvalues to list.
    #[arg(long, default_value_t = 4)]
    pub spectrum: usize,
    /// Register sizes; when given, runs estimation experiments instead.
    #[arg(long)]
    pub m: Option<IntSweep>,
    #[arg(long, default_value = "full")]
    pub d: IntSweep,
    /// Eigenvalue indices to estimate (0 is the ground state).
    #[arg(long, default_value = "0")]
    pub level: IntSweep,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_NOISE_CONSTANT)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn tfim(args: &TfimArgs) -> Result<Outcome, CliError> {
    let spec = TfimSpec::new(args.n, args.coupling, args.field)?;
    let energies = spectrum(&spec)?;
    let Some(m_sweep) = &args.m else {
        let mut report = Report::new(
            "tfim",
            json!({ "n": args.n, "J": args.coupling, "h": args.field, "spectrum": args.spectrum }),
        );
        for (level, e) in energies.iter().take(args.spectrum).enumerate() {
            report.push(json!({ "level": level, "energy": e }));
        }
        return Ok(report.into());
    };

    let ms = m_sweep.values()?;
    let levels = args.level.values()?;
    let mut report = Report::new(
        "tfim",
        json!({
            "n": args.n,
            "J": args.coupling,
            "h": args.field,
            "m": ms,
            "d": args.d.to_string(),
            "level": levels,
            "eps": args.eps,
            "c": args.c,
            "mode": args.mode.name(),
            "shots": args.shots,
            "seed": args.seed,
        }),
    );
    let mut tasks = Vec::new();
    for &m in &ms {
        for depth in args.d.depth_labels(m)? {
            for &level in &levels {
                tasks.push((m, depth, level));
            }
        }
    }
    let results = tasks
        .par_iter()
        .enumerate()
        .map(|(i, &(m, depth, level))| {
            let mode = match args.mode {
                ModeArg::Exact => EvalMode::Exact,
                ModeArg::Sampled => EvalMode::Sampled {
                    shots: args.shots,
                    seed: args.seed.wrapping_add(i as u64),
                },
            };
            let settings = QpeSettings {
                level,
                m,
                depth,
                eps_2q: args.eps,
                c: args.c,
                mode,
            };
            qpe_energy_experiment_with_spectrum(&energies, &settings)
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (&(m, depth, _), r) in tasks.iter().zip(&results) {
        report.push(json!({
            "n": args.n,
            "level": r.level,
            "m": m,
            "depth": depth.resolve(m),
            "full": depth == Depth::Full,
            "eps_2q": args.eps,
            "true_energy": r.true_energy,
            "estimated_energy": r.estimated_energy,
            "e_scale": r.e_scale,
            "phi": r.phi,
            "on_grid": r.on_grid,
            "wrapped": r.wrapped,
            "phase_rmse": r.phase_rmse,
            "energy_rmse": r.energy_rmse,
            "model_rmse": r.budget.rmse,
            "model_energy_rmse": r.model_energy_rmse,
        }));
    }
    Ok(report.into())
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub m: usize,
    /// Depth, or `full`.
    #[arg(long, default_value = "full")]
    pub d: String,
}

/// Circuit in the plan text format.
pub fn plan(args: &PlanArgs) -> Result<String, CliError> {
    let d = match args.d.trim() {
        "full" => args.m,
        s => s
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid depth '{s}'")))?,
    };
    Ok(plan_pfa_tqft(args.m, d)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Wrap<T: Args> {
        #[command(flatten)]
        inner: T,
    }

    fn parse<T: Args>(argv: &[&str]) -> T {
        Wrap::<T>::try_parse_from(std::iter::once("x").chain(argv.iter().copied()))
            .unwrap()
            .inner
    }

    #[test]
    fn tvd_rows_and_ratio() {
        let a: TvdArgs = parse(&["--m", "4", "--d", "all", "--phases", "50", "--grid", "64"]);
        let out = tvd(&a).unwrap();
        assert!(out.violations.is_empty());
        assert_eq!(out.report.rows.len(), 4);
        let last = &out.report.rows[3];
        assert_eq!(last["max_tv"], 0.0);
        assert_eq!(last["ratio"], Value::Null);
        let a: TvdArgs = parse(&["--m", "13"]);
        assert!(matches!(tvd(&a), Err(CliError::Usage(_))));
    }

    #[test]
    fn gate_rows() {
        let out = gates(&parse(&["--m", "30", "--d", "11,13,14,30"])).unwrap();
        let g: Vec<u64> = out
            .report
            .rows
            .iter()
            .map(|r| r["gates"].as_u64().unwrap())
            .collect();
        assert_eq!(g, vec![245, 282, 299, 435]);
        assert_eq!(out.report.rows[3]["reduction_pct"], 0.0);
        let out = gates(&parse(&["--m", "50", "--d", "10"])).unwrap();
        assert!(out.report.rows[0]["reduction_pct"].as_f64().unwrap() > 60.0);
    }

    #[test]
    fn cliff_exact_and_sampled() {
        let a: CliffArgs = parse(&["--m", "5", "--d", "1..5", "--phases", "grid:64"]);
        let out = cliff(&a).unwrap();
        let s: Vec<f64> = out
            .report
            .column_f64("success_exact")
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(s.len(), 5);
        assert!(s[4] >= s[0]);
        assert!(
            out.report.rows[4]["success_exact_min"].as_f64().unwrap()
                >= 8.0 / std::f64::consts::PI.powi(2)
        );
        assert_eq!(out.report.rows[0]["cliff_depth_marker"], 5);
        assert_eq!(out.report.rows[0]["success_sampled"], Value::Null);

        let a: CliffArgs = parse(&[
            "--m", "4", "--d", "4", "--mode", "sampled", "--phases", "grid:16",
        ]);
        let one = cliff(&a).unwrap();
        let two = cliff(&a).unwrap();
        assert_eq!(one.report, two.report);
        let exact = one.report.rows[0]["success_exact"].as_f64().unwrap();
        let sampled = one.report.rows[0]["success_sampled"].as_f64().unwrap();
        assert!((exact - sampled).abs() < 0.05);
    }

    #[test]
    fn platform_rows() {
        let out = platforms(&parse(&["--m", "30"])).unwrap();
        let d: Vec<u64> = out
            .report
            .rows
            .iter()
            .map(|r| r["d_star"].as_u64().unwrap())
            .collect();
        assert_eq!(d, vec![11, 13, 14, 11]);
        let a: PlatformsArgs = parse(&["--platforms", "/nonexistent/registry.csv"]);
        assert_eq!(platforms(&a).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn rmse_and_crossover() {
        let out = rmse(&parse(&["--m", "16", "--d", "11,full", "--eps", "1e-3"])).unwrap();
        assert_eq!(out.report.rows.len(), 2);
        assert_eq!(out.report.rows[1]["full"], true);
        assert_eq!(out.report.rows[1]["tv"], 0.0);

        let out = crossover(&parse(&[])).unwrap();
        assert_eq!(out.report.rows[0]["gates"], 105);
        assert_eq!(out.report.rows[0]["gates_full"], 120);
        let out = crossover(&parse(&[
            "--tv",
            "0.046",
            "--gates-full",
            "120",
            "--gates",
            "90",
        ]))
        .unwrap();
        let eps = out.report.rows[0]["eps_cross"].as_f64().unwrap();
        assert!((eps - 1.01e-2).abs() < 1e-4);
        assert!(crossover(&parse(&["--d", "16"])).is_err());
    }

    #[test]
    fn tfim_spectrum_and_experiment() {
        let out = tfim(&parse(&[
            "--n",
            "4",
            "--J",
            "1",
            "--h",
            "0.5",
            "--spectrum",
            "4",
        ]))
        .unwrap();
        let e: Vec<f64> = out
            .report
            .column_f64("energy")
            .into_iter()
            .flatten()
            .collect();
        for (a, b) in e.iter().zip([-3.4270, -3.3322, -1.8268, -1.7321]) {
            assert!((a - b).abs() < 1e-3);
        }
        let out = tfim(&parse(&["--m", "8,10", "--d", "6,full", "--level", "0,2"])).unwrap();
        assert_eq!(out.report.rows.len(), 8);
        assert_eq!(out.report.rows[0]["on_grid"], true);
        assert_eq!(out.report.rows[1]["on_grid"], false);
    }

    #[test]
    fn plan_text() {
        let text = plan(&parse(&["--m", "3", "--d", "2"])).unwrap();
        assert!(text.starts_with("m=3 d=2\n"));
        assert!(plan(&parse(&["--m", "3", "--d", "x"])).is_err());
        assert!(plan(&parse(&["--m", "3", "--d", "4"])).is_err());
    }
}
