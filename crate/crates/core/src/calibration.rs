//! Hardware-facing design rules.
//!
//! Everything here is closed-form: the truncation depth chosen from a
//! device's two-qubit error rate, the TVD bounds, the equal-budget and
//! fidelity-cliff depths, a three-term RMSE model
//!
//! ```text
//! RMSE² = 1/(3·2^{2m}) + TV²/3 + (G·ε₂q·c)²,   TV = π(m-d)/2^d
//! ```
//!
//! and the error rate at which truncated and full QFT break even under it.

use std::f64::consts::PI;
use std::io::Read;

use serde::Serialize;

use crate::error::{param_err, Error, Result};
use crate::qft::{full_gate_count, gate_count, rotation_angle};

/// Noise constant of the RMSE model when none is supplied.
pub const DEFAULT_NOISE_CONSTANT: f64 = 0.033;

/// `d* = ⌊log₂(2π/ε₂q)⌋`: the deepest rotation whose angle `2π/2^d` is
/// still at least the gate error rate.
pub fn d_star(eps_2q: f64) -> Result<usize> {
    if !(eps_2q > 0.0 && eps_2q < 2.0 * PI) {
        return param_err(format!(
            "two-qubit error rate must lie in (0, 2π), got {eps_2q}"
        ));
    }
    // Compare angles directly; dividing 2π by a power of two is exact, so
    // boundary cases such as ε = 2π/2^10 land on the right integer.
    let mut d = (2.0 * PI / eps_2q).log2().floor().max(0.0) as u32;
    while d > 0 && rotation_angle(d) < eps_2q {
        d -= 1;
    }
    while rotation_angle(d + 1) >= eps_2q {
        d += 1;
    }
    Ok(d as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// `(m - d) sin(π/2^d)`
    Tight,
    /// `π(m - d)/2^d`
    Loose,
}

/// Upper bound on the TVD between full and depth-`d` QPE distributions.
pub fn tvd_bound(m: usize, d: usize, form: BoundForm) -> Result<f64> {
    if d < 1 || d > m {
        return param_err(format!(
            "truncation depth must satisfy 1 <= d <= m = {m}, got {d}"
        ));
    }
    let omitted = (m - d) as f64;
    let x = PI / 2f64.powi(d as i32);
    Ok(match form {
        BoundForm::Tight => omitted * x.sin(),
        BoundForm::Loose => omitted * x,
    })
}

/// Depth at which the truncation term equals a failure budget `alpha`:
/// `log₂(πm/α)`, unrounded.
pub fn equal_budget_depth(alpha: f64, m: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param_err(format!("failure budget must lie in (0, 1), got {alpha}"));
    }
    if m == 0 {
        return param_err("register size must be at least 1");
    }
    Ok((PI * m as f64 / alpha).log2())
}

/// Fidelity-cliff depth `⌈log₂ m⌉ + 2`.
pub fn cliff_depth(m: usize) -> Result<usize> {
    if m < 2 {
        return param_err(format!("cliff depth needs m >= 2, got {m}"));
    }
    let ceil_log2 = (usize::BITS - (m - 1).leading_zeros()) as usize;
    Ok(ceil_log2 + 2)
}

/// Full QFT or a truncation depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Depth {
    Full,
    Truncated(usize),
}

impl Depth {
    /// Concrete depth for an `m`-qubit register.
    pub fn resolve(self, m: usize) -> usize {
        match self {
            Depth::Full => m,
            Depth::Truncated(d) => d,
        }
    }
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::Full => f.write_str("full"),
            Depth::Truncated(d) => write!(f, "{d}"),
        }
    }
}

/// Three-term RMSE decomposition, in phase units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub m: usize,
    pub depth: usize,
    pub gates: u64,
    pub tv: f64,
    pub eps_2q: f64,
    pub c: f64,
    pub precision_term: f64,
    pub truncation_term: f64,
    pub noise_term: f64,
    pub rmse: f64,
}

impl ErrorBudget {
    /// RMSE converted to energy units for a spectrum mapped onto `[0, 1)`
    /// with half-width `e_scale`.
    pub fn rmse_energy(&self, e_scale: f64) -> f64 {
        self.rmse * 2.0 * e_scale
    }
}

/// Evaluates the RMSE model. The full variant uses `TV = 0` and
/// `G = m(m-1)/2`.
pub fn rmse_model(m: usize, depth: Depth, eps_2q: f64, c: f64) -> Result<ErrorBudget> {
    if m == 0 {
        return param_err("register size must be at least 1");
    }
    if !(0.0..1.0).contains(&eps_2q) {
        return param_err(format!(
            "two-qubit error rate must lie in [0, 1), got {eps_2q}"
        ));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return param_err(format!(
            "noise constant must be finite and non-negative, got {c}"
        ));
    }
    let (d, tv, gates) = match depth {
        Depth::Full => (m, 0.0, full_gate_count(m)),
        Depth::Truncated(d) => (d, tvd_bound(m, d, BoundForm::Loose)?, gate_count(m, d)?),
    };
    let precision_term = 1.0 / (3.0 * 4f64.powi(m as i32));
    let truncation_term = tv * tv / 3.0;
    let noise = gates as f64 * eps_2q * c;
    let noise_term = noise * noise;
    Ok(ErrorBudget {
        m,
        depth: d,
        gates,
        tv,
        eps_2q,
        c,
        precision_term,
        truncation_term,
        noise_term,
        rmse: (precision_term + truncation_term + noise_term).sqrt(),
    })
}

/// Error rate at which the truncated and full RMSE budgets coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossover {
    pub m: usize,
    pub d: usize,
    pub c: f64,
    pub tv: f64,
    pub gates_full: u64,
    pub gates: u64,
    pub eps_cross: f64,
}

/// `ε^× = (TV/√3) / (c √(G_full² - G²))` from explicit inputs.
pub fn crossover_eps_from_inputs(tv: f64, gates_full: f64, gates: f64, c: f64) -> Result<f64> {
    if !(gates_full > gates && gates >= 0.0) {
        return param_err("crossover requires G_full > G >= 0");
    }
    if !(c > 0.0 && c.is_finite()) {
        return param_err(format!("noise constant must be positive, got {c}"));
    }
    if !(tv >= 0.0 && tv.is_finite()) {
        return param_err(format!("TV must be finite and non-negative, got {tv}"));
    }
    Ok((tv / 3f64.sqrt()) / (c * (gates_full * gates_full - gates * gates).sqrt()))
}

/// Crossover for depth `d < m` with `TV = π(m-d)/2^d` and exact gate counts.
/// Above the returned rate the truncated circuit has the smaller RMSE.
pub fn crossover_eps(m: usize, d: usize, c: f64) -> Result<Crossover> {
    if d >= m {
        return param_err(format!("crossover undefined for d = m (d = {d}, m = {m})"));
    }
    let tv = tvd_bound(m, d, BoundForm::Loose)?;
    let gates_full = full_gate_count(m);
    let gates = gate_count(m, d)?;
    let eps_cross = crossover_eps_from_inputs(tv, gates_full as f64, gates as f64, c)?;
    Ok(Crossover {
        m,
        d,
        c,
        tv,
        gates_full,
        gates,
        eps_cross,
    })
}

/// A named device and its two-qubit depolarizing error rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatformCalibration {
    pub name: String,
    pub eps_2q: f64,
}

impl PlatformCalibration {
    pub fn new(name: impl Into<String>, eps_2q: f64) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return param_err("platform name must not be empty");
        }
        if !(eps_2q > 0.0 && eps_2q < 1.0) {
            return param_err(format!(
                "{name}: error rate must lie in (0, 1), got {eps_2q}"
            ));
        }
        Ok(Self { name, eps_2q })
    }

    pub fn d_star(&self) -> usize {
        d_star(self.eps_2q).expect("registry rates are validated on construction")
    }
}

/// Immutable list of platforms.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatformRegistry {
    platforms: Vec<PlatformCalibration>,
}

impl PlatformRegistry {
    /// The four built-in devices.
    pub fn builtin() -> Self {
        let rows = [
            ("IBM Eagle r3", 3e-3),
            ("IBM Heron r2", 5e-4),
            ("IonQ Aria", 3e-4),
            ("IQM Garnet", 2e-3),
        ];
        Self {
            platforms: rows
                .iter()
                .map(|&(n, e)| PlatformCalibration::new(n, e).unwrap())
                .collect(),
        }
    }

    /// Parses `name,eps_2q` records. Blank lines and `#` comments are
    /// skipped, as is an optional `name,eps_2q` header. Names containing
    /// commas must be quoted.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut platforms = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line =
                |rec: &csv::StringRecord| rec.position().map_or(i + 1, |p| p.line() as usize);
            let rec = rec.map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            if rec.len() != 2 {
                return Err(Error::Parse {
                    line: line(&rec),
                    message: format!("expected `name,eps_2q`, got {} fields", rec.len()),
                });
            }
            if platforms.is_empty() && rec[0].eq_ignore_ascii_case("name") {
                continue;
            }
            let eps: f64 = rec[1].parse().map_err(|_| Error::Parse {
                line: line(&rec),
                message: format!("invalid error rate {:?}", &rec[1]),
            })?;
            let p = PlatformCalibration::new(&rec[0], eps).map_err(|e| Error::Parse {
                line: line(&rec),
                message: e.to_string(),
            })?;
            platforms.push(p);
        }
        if platforms.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "registry contains no platforms".into(),
            });
        }
        Ok(Self { platforms })
    }

    pub fn platforms(&self) -> &[PlatformCalibration] {
        &self.platforms
    }
}

/// One row of the platform table at register size `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatformRow {
    pub name: String,
    pub eps_2q: f64,
    pub d_star: usize,
    /// Depth actually used: `d*`, or `m` when `d* > m`.
    pub depth: usize,
    pub gates: u64,
    pub gates_full: u64,
    pub reduction_pct: f64,
    /// Set when `d* > m`, i.e. the platform runs the full QFT.
    pub full_qft: bool,
}

/// Gate counts and reduction for every platform at register size `m`.
pub fn platform_report(registry: &PlatformRegistry, m: usize) -> Result<Vec<PlatformRow>> {
    if m == 0 {
        return param_err("register size must be at least 1");
    }
    registry
        .platforms()
        .iter()
        .map(|p| {
            let d_star = p.d_star();
            let full_qft = d_star > m;
            let depth = d_star.clamp(1, m);
            let gates = gate_count(m, depth)?;
            let gates_full = full_gate_count(m);
            let reduction_pct = if gates_full == 0 {
                0.0
            } else {
                100.0 * (1.0 - gates as f64 / gates_full as f64)
            };
            Ok(PlatformRow {
                name: p.name.clone(),
                eps_2q: p.eps_2q,
                d_star,
                depth,
                gates,
                gates_full,
                reduction_pct,
                full_qft,
            })
        })
        .collect()
}
