//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p pfa-tqft-cli --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pfa_tqft::calibration::{
    cliff_depth, crossover_eps, d_star, equal_budget_depth, rmse_model, tvd_bound, BoundForm, Depth,
};
use pfa_tqft::numerics::{Complex64, DenseComplexMatrix, SeededRng};
use pfa_tqft::qft::{gate_count, plan_pfa_tqft, rotation_angle, Direction};
use pfa_tqft::qpe::{
    max_tvd_profile, phase_distribution, success_probability, EvalMode, MaxTvd, PhaseSampling,
};
use pfa_tqft::tfim::{ground_energy, spectrum, TfimSpec};
use pfa_tqft_cli::output::Format;
use pfa_tqft_cli::suite::run_suite;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn profile(m: usize) -> Result<Vec<MaxTvd>, String> {
    let depths: Vec<usize> = (1..=m).collect();
    max_tvd_profile(m, &depths, &PhaseSampling::default()).map_err(|e| e.to_string())
}

fn tvd_bound_holds() -> Check {
    let start = Instant::now();
    let mut rows = 0;
    let mut worst = 0.0f64;
    for m in 4..=10 {
        for r in profile(m)? {
            let bound = tvd_bound(m, r.d, BoundForm::Tight).map_err(|e| e.to_string())?;
            ensure(r.value <= bound, || {
                format!(
                    "m={m} d={}: {} > {bound} at phase {}",
                    r.d, r.value, r.phase
                )
            })?;
            if bound > 0.0 {
                worst = worst.max(r.value / bound);
            }
            rows += 1;
        }
    }
    within_time(start.elapsed(), 60.0)?;
    Ok(format!(
        "{rows} (m, d) pairs, 4596 phases each, max TV/bound {worst:.3}, {:.1} s",
        start.elapsed().as_secs_f64()
    ))
}

fn tvd_reference_values() -> Check {
    let reference = [
        (4, 2, 0.4381, 0.10),
        (5, 3, 0.1331, 0.10),
        (4, 3, 0.0518, 0.10),
        (6, 5, 0.0038, 0.25),
    ];
    let mut max_ratio = 0.0f64;
    let mut found = Vec::new();
    for m in 4..=10 {
        let rows = profile(m)?;
        for r in &rows {
            if r.d == m {
                ensure(r.value == 0.0, || format!("m={m} d=m gives {}", r.value))?;
                continue;
            }
            let loose = tvd_bound(m, r.d, BoundForm::Loose).map_err(|e| e.to_string())?;
            max_ratio = max_ratio.max(r.value / loose);
        }
        for &(rm, rd, want, tol) in &reference {
            if rm == m {
                let got = rows[rd - 1].value;
                ensure((got - want).abs() <= tol * want, || {
                    format!("({rm},{rd}) = {got:.4}, reference {want} ±{}%", tol * 100.0)
                })?;
                found.push(format!("({rm},{rd})={got:.4}"));
            }
        }
    }
    ensure((0.20..=0.32).contains(&max_ratio), || {
        format!("max ratio {max_ratio:.3} outside [0.20, 0.32]")
    })?;
    Ok(format!("{}, max ratio {max_ratio:.3}", found.join(" ")))
}

fn gate_counts() -> Check {
    for (d, want) in [(11, 245), (13, 282), (14, 299), (30, 435)] {
        let got = gate_count(30, d).map_err(|e| e.to_string())?;
        ensure(got == want, || {
            format!("G(30,{d}) = {got}, expected {want}")
        })?;
    }
    let mut plans = 0;
    for m in 1..=32 {
        for d in 1..=m {
            let plan = plan_pfa_tqft(m, d).map_err(|e| e.to_string())?;
            let g = gate_count(m, d).map_err(|e| e.to_string())?;
            ensure(plan.controlled_phase_count() as u64 == g, || {
                format!(
                    "m={m} d={d}: plan has {} rotations, count {g}",
                    plan.controlled_phase_count()
                )
            })?;
            plans += 1;
        }
    }
    Ok(format!(
        "G(30, 11/13/14/30) = 245/282/299/435; {plans} plans enumerated"
    ))
}

fn pfa_depths() -> Check {
    for (eps, want) in [(3e-3, 11), (5e-4, 13), (3e-4, 14), (2e-3, 11)] {
        let d = d_star(eps).map_err(|e| e.to_string())?;
        ensure(d == want, || format!("d*({eps}) = {d}, expected {want}"))?;
        let (kept, dropped) = (rotation_angle(d as u32), rotation_angle(d as u32 + 1));
        ensure(kept >= eps && eps > dropped, || {
            format!("eps {eps}: angles {kept} / {dropped} do not bracket it")
        })?;
    }
    Ok("d* = 11, 13, 14, 11 with bracketing rotation angles".into())
}

fn equal_budget() -> Check {
    let x = equal_budget_depth(0.05, 30).map_err(|e| e.to_string())?;
    ensure((10.85..=10.95).contains(&x), || {
        format!("depth {x} outside [10.85, 10.95]")
    })?;
    let d = d_star(3e-3).map_err(|e| e.to_string())?;
    ensure(x.ceil() as usize == d, || {
        format!("ceil({x}) != d*(3e-3) = {d}")
    })?;
    Ok(format!("{x:.4}, ceiling {d}"))
}

fn fejer(phi: f64, y: usize, n: usize) -> f64 {
    // direct geometric sum, independent of the library's closed form
    let amp: Complex64 = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 * (phi - y as f64 / n as f64)))
        .sum();
    amp.norm_sqr() / (n * n) as f64
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = SeededRng::new(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = 1 + (rng.uniform() * 12.0) as usize;
        let phi = rng.uniform();
        let n = 1usize << m;
        let dist = phase_distribution(phi, m, m).map_err(|e| e.to_string())?;
        for (y, p) in dist.probs().iter().enumerate() {
            worst = worst.max((p - fejer(phi, y, n)).abs());
        }
    }
    ensure(worst < 1e-10, || {
        format!("circuit vs kernel differ by {worst:e}")
    })?;
    let mut worst_u = 0.0f64;
    for m in 1..=6 {
        let n = 1usize << m;
        let dft = DenseComplexMatrix::from_fn(n, |y, x| {
            Complex64::from_polar(
                1.0 / (n as f64).sqrt(),
                2.0 * PI * ((x * y) % n) as f64 / n as f64,
            )
        });
        let u = plan_pfa_tqft(m, m)
            .and_then(|p| p.unitary(Direction::Forward))
            .map_err(|e| e.to_string())?;
        worst_u = worst_u.max(u.max_abs_diff(&dft));
    }
    ensure(worst_u < 1e-10, || {
        format!("plan vs DFT differ by {worst_u:e}")
    })?;
    within_time(start.elapsed(), 60.0)?;
    Ok(format!("kernel diff {worst:.1e}, DFT diff {worst_u:.1e}"))
}

fn qpe_floor() -> Check {
    let floor = 8.0 / (PI * PI);
    let mut lowest = 1.0f64;
    for m in [4, 8] {
        for i in 0..1024 {
            let phi = i as f64 / 1024.0;
            let p = success_probability(phi, m, m, EvalMode::Exact).map_err(|e| e.to_string())?;
            ensure(p >= floor, || format!("m={m} phi={phi}: {p} < 8/pi^2"))?;
            lowest = lowest.min(p);
        }
    }
    Ok(format!("minimum {lowest:.4} >= {floor:.4}"))
}

fn tfim_spectrum() -> Check {
    let start = Instant::now();
    let spec = TfimSpec::new(4, 1.0, 0.5).map_err(|e| e.to_string())?;
    let e = spectrum(&spec).map_err(|e| e.to_string())?;
    for (k, want) in [-3.4270, -3.3322, -1.8268, -1.7321].into_iter().enumerate() {
        ensure((e[k] - want).abs() < 1e-3, || {
            format!("E{k} = {}, expected {want}", e[k])
        })?;
    }
    let e0 = ground_energy(&spec).map_err(|e| e.to_string())?;
    ensure((e0 + 3.427034).abs() < 1e-5, || format!("E0 = {e0}"))?;
    within_time(start.elapsed(), 1.0)?;
    Ok(format!(
        "E0 = {e0:.6}, {:.3} s",
        start.elapsed().as_secs_f64()
    ))
}

fn fidelity_cliff() -> Check {
    let m = 8;
    let marker = cliff_depth(m).map_err(|e| e.to_string())?;
    let mean = |d: usize| -> Result<f64, String> {
        let mut s = 0.0;
        for i in 0..256 {
            let phi = (i as f64 + 0.5) / 256.0;
            s += success_probability(phi, m, d, EvalMode::Exact).map_err(|e| e.to_string())?;
        }
        Ok(s / 256.0)
    };
    let full = mean(m)?;
    for d in 1..=m {
        let p = mean(d)?;
        if d + 3 <= marker {
            ensure(full - p >= 0.15, || {
                format!("d={d}: {p:.4} not 0.15 below {full:.4}")
            })?;
        }
        if d >= marker {
            ensure((full - p).abs() <= 0.02, || {
                format!("d={d}: {p:.4} not within 0.02 of {full:.4}")
            })?;
        }
    }
    Ok(format!("cliff depth {marker}, full success {full:.4}"))
}

fn crossover_synergy() -> Check {
    let (m, d, c) = (16, 11, 0.033);
    let x = crossover_eps(m, d, c).map_err(|e| e.to_string())?.eps_cross;
    let gap = |eps: f64| -> Result<f64, String> {
        let t = rmse_model(m, Depth::Truncated(d), eps, c).map_err(|e| e.to_string())?;
        let f = rmse_model(m, Depth::Full, eps, c).map_err(|e| e.to_string())?;
        Ok(t.rmse - f.rmse)
    };
    let log_grid = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    };
    for eps in log_grid(1.01 * x, 0.99, 400) {
        ensure(gap(eps)? < 0.0, || {
            format!("truncated not better at eps={eps:e}")
        })?;
    }
    for eps in log_grid(1e-8, 0.99 * x, 400).into_iter().chain([0.0]) {
        ensure(gap(eps)? > 0.0, || {
            format!("full not better at eps={eps:e}")
        })?;
    }
    let signs: Vec<bool> = log_grid(1e-4, 1e-2, 2001)
        .into_iter()
        .map(|e| gap(e).map(|g| g < 0.0))
        .collect::<Result<_, _>>()?;
    let crossings = signs.windows(2).filter(|w| w[0] != w[1]).count();
    ensure(crossings == 1, || {
        format!("{crossings} crossings on [1e-4, 1e-2]")
    })?;
    Ok(format!("eps_cross = {x:.4e}, one crossing"))
}

fn determinism() -> Check {
    let start = Instant::now();
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ra = run_suite(a.path(), Format::Csv).map_err(|e| e.to_string())?;
    let rb = run_suite(b.path(), Format::Csv).map_err(|e| e.to_string())?;
    ensure(ra.violations.is_empty(), || {
        format!("suite reported {:?}", ra.violations)
    })?;
    for (fa, fb) in ra.files.iter().zip(&rb.files) {
        let (x, y) = (std::fs::read(fa), std::fs::read(fb));
        let (x, y) = (x.map_err(|e| e.to_string())?, y.map_err(|e| e.to_string())?);
        ensure(x == y, || format!("{} differs between runs", fa.display()))?;
    }
    within_time(start.elapsed(), 600.0)?;
    Ok(format!(
        "{} files identical across two suite runs, {:.1} s total",
        ra.files.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("tvd-bound", tvd_bound_holds),
        ("tvd-reference", tvd_reference_values),
        ("gate-counts", gate_counts),
        ("pfa-depths", pfa_depths),
        ("equal-budget-depth", equal_budget),
        ("oracle-equivalence", oracle_equivalence),
        ("qpe-floor", qpe_floor),
        ("tfim-spectrum", tfim_spectrum),
        ("fidelity-cliff", fidelity_cliff),
        ("crossover-synergy", crossover_synergy),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
