//! Sweep syntax for list-valued flags.
//!
//! Integer lists: `4`, `4,5,6`, `1..5` (inclusive), and for depths the
//! keywords `all` (every `1..=m`) and `full` (`d = m`).
//! Float lists: `1e-3`, `1e-4,1e-3`, `1e-4..1e-2:log8`, `0..1:lin5`
//! (endpoints included). Phase samplings: `grid:N`, `random:N`, or both
//! joined with a comma.

use std::str::FromStr;

use pfa_tqft::calibration::Depth;
use pfa_tqft::qpe::PhaseSampling;

use crate::error::CliError;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid {what} '{s}'")))
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Item {
    Value(usize),
    Range(usize, usize),
    All,
    Full,
}

/// A parsed integer sweep. Depth keywords are resolved per register size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSweep {
    items: Vec<Item>,
    source: String,
}

impl FromStr for IntSweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut items = Vec::new();
        for part in s.split(',').map(str::trim) {
            let item = match part {
                "" => return usage(format!("empty item in list '{s}'")),
                "all" => Item::All,
                "full" => Item::Full,
                _ => match part.split_once("..") {
                    Some((a, b)) => {
                        let b = b.strip_prefix('=').unwrap_or(b);
                        let (a, b) = (parse_num(a, "integer")?, parse_num(b, "integer")?);
                        if a > b {
                            return usage(format!("empty range '{part}'"));
                        }
                        Item::Range(a, b)
                    }
                    None => Item::Value(parse_num(part, "integer")?),
                },
            };
            items.push(item);
        }
        Ok(Self {
            items,
            source: s.to_string(),
        })
    }
}

impl std::fmt::Display for IntSweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.source)
    }
}

impl IntSweep {
    /// Values without keywords, sorted and deduplicated.
    pub fn values(&self) -> Result<Vec<usize>, CliError> {
        let mut out = Vec::new();
        for item in &self.items {
            match *item {
                Item::Value(v) => out.push(v),
                Item::Range(a, b) => out.extend(a..=b),
                Item::All | Item::Full => {
                    return usage(format!("'{}' only allowed for depths", self.source))
                }
            }
        }
        Ok(sorted_unique(out))
    }

    /// Depths for register size `m`, sorted and deduplicated, each in `1..=m`.
    pub fn depths(&self, m: usize) -> Result<Vec<usize>, CliError> {
        let mut out = Vec::new();
        for item in &self.items {
            match *item {
                Item::Value(v) => out.push(v),
                Item::Range(a, b) => out.extend(a..=b),
                Item::All => out.extend(1..=m),
                Item::Full => out.push(m),
            }
        }
        let out = sorted_unique(out);
        if let Some(&bad) = out.iter().find(|&&d| d == 0 || d > m) {
            return usage(format!("depth {bad} outside 1..={m}"));
        }
        Ok(out)
    }

    /// Depths keeping `full` distinct from an explicit `d = m`.
    pub fn depth_labels(&self, m: usize) -> Result<Vec<Depth>, CliError> {
        let mut out: Vec<Depth> = Vec::new();
        let explicit: Vec<usize> = self
            .items
            .iter()
            .filter(|i| !matches!(i, Item::Full))
            .flat_map(|i| match *i {
                Item::Value(v) => v..=v,
                Item::Range(a, b) => a..=b,
                _ => 1..=m,
            })
            .collect();
        for d in sorted_unique(explicit) {
            if d == 0 || d > m {
                return usage(format!("depth {d} outside 1..={m}"));
            }
            out.push(Depth::Truncated(d));
        }
        if self.items.contains(&Item::Full) {
            out.push(Depth::Full);
        }
        Ok(out)
    }
}

/// A parsed float sweep, kept in the given order.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatSweep {
    values: Vec<f64>,
    source: String,
}

impl FromStr for FloatSweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut values = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part.is_empty() {
                return usage(format!("empty item in list '{s}'"));
            }
            let Some((range, spacing)) = part.split_once(':') else {
                values.push(parse_num::<f64>(part, "number")?);
                continue;
            };
            let Some((a, b)) = range.split_once("..") else {
                return usage(format!("'{part}' is not a range"));
            };
            let (a, b): (f64, f64) = (parse_num(a, "number")?, parse_num(b, "number")?);
            let (log, count) = if let Some(n) = spacing.strip_prefix("log") {
                (true, n)
            } else if let Some(n) = spacing.strip_prefix("lin") {
                (false, n)
            } else {
                return usage(format!(
                    "unknown spacing '{spacing}' (expected logN or linN)"
                ));
            };
            let count: usize = parse_num(count, "point count")?;
            if count < 2 {
                return usage(format!("'{part}' needs at least 2 points"));
            }
            if log && !(a > 0.0 && b > 0.0) {
                return usage(format!("log range '{part}' needs positive endpoints"));
            }
            let steps = (count - 1) as f64;
            for i in 0..count {
                let t = i as f64 / steps;
                let v = if i == 0 {
                    a
                } else if i == count - 1 {
                    b
                } else if log {
                    (a.ln() + t * (b.ln() - a.ln())).exp()
                } else {
                    a + t * (b - a)
                };
                values.push(v);
            }
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return usage(format!("non-finite value {bad} in '{s}'"));
        }
        Ok(Self {
            values,
            source: s.to_string(),
        })
    }
}

impl std::fmt::Display for FloatSweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.source)
    }
}

impl FloatSweep {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Phase sampling spec: `grid:N`, `random:N`, or `random:N,grid:M`. The
/// random part draws from the command's `--seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseSpec {
    pub random: usize,
    pub grid: usize,
}

impl FromStr for PhaseSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut spec = PhaseSpec { random: 0, grid: 0 };
        for part in s.split(',').map(str::trim) {
            match part.split_once(':') {
                Some(("grid", n)) => spec.grid += parse_num::<usize>(n, "grid size")?,
                Some(("random", n)) => spec.random += parse_num::<usize>(n, "phase count")?,
                _ => {
                    return usage(format!(
                        "invalid phase spec '{part}' (expected grid:N or random:N)"
                    ))
                }
            }
        }
        if spec.random == 0 && spec.grid == 0 {
            return usage("phase spec selects no phases");
        }
        Ok(spec)
    }
}

impl std::fmt::Display for PhaseSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.random, self.grid) {
            (0, g) => write!(f, "grid:{g}"),
            (r, 0) => write!(f, "random:{r}"),
            (r, g) => write!(f, "random:{r},grid:{g}"),
        }
    }
}

impl PhaseSpec {
    pub fn sampling(&self, seed: u64) -> PhaseSampling {
        PhaseSampling {
            random: self.random,
            seed,
            grid: self.grid,
        }
    }
}
