//! Depth-truncated QFT circuit plans.
//!
//! Stage `j` (qubit `j`, zero-based) applies a Hadamard and then the
//! controlled rotations `R_k = diag(1, e^{2πi/2^k})` for
//! `k = 2..=min(d, m - j)`, each controlled by qubit `j + k - 1`. Rotations
//! with `k > d` are dropped. A classical bit-reversal relabelling closes the
//! circuit; it is not a two-qubit gate and is not counted.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{param_err, Error, Result};
use crate::numerics::{DenseComplexMatrix, StateVector, MAX_STATE_QUBITS};

/// Largest register for which a plan can be enumerated.
pub const MAX_PLAN_QUBITS: usize = 64;

/// Largest register for the dense reference matrices.
pub const MAX_DENSE_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    Hadamard {
        target: usize,
    },
    /// Controlled `R_k`, angle `2π / 2^k`.
    ControlledPhase {
        k: u32,
        control: usize,
        target: usize,
    },
    BitReversal,
}

impl GateOp {
    /// Rotation angle of a controlled-phase gate.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::ControlledPhase { k, .. } => Some(rotation_angle(k)),
            _ => None,
        }
    }
}

/// `θ_k = 2π / 2^k`.
pub fn rotation_angle(k: u32) -> f64 {
    TAU / 2f64.powi(k as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Immutable gate list for the depth-`d` truncated QFT on `m` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitPlan {
    m: usize,
    d: usize,
    gates: Vec<GateOp>,
}

fn check_depth(m: usize, d: usize) -> Result<()> {
    if m == 0 {
        return param_err("register size must be at least 1");
    }
    if d < 1 || d > m {
        return param_err(format!(
            "truncation depth must satisfy 1 <= d <= m = {m}, got {d}"
        ));
    }
    Ok(())
}

/// Builds the truncated QFT plan. `d` is validated, never clamped: pass
/// `d = m` for the full transform.
pub fn plan_pfa_tqft(m: usize, d: usize) -> Result<CircuitPlan> {
    check_depth(m, d)?;
    if m > MAX_PLAN_QUBITS {
        return param_err(format!("register size {m} exceeds {MAX_PLAN_QUBITS}"));
    }
    let mut gates = Vec::with_capacity(m + 1 + gate_count(m, d)? as usize);
    for j in 0..m {
        gates.push(GateOp::Hadamard { target: j });
        for k in 2..=d.min(m - j) {
            gates.push(GateOp::ControlledPhase {
                k: k as u32,
                control: j + k - 1,
                target: j,
            });
        }
    }
    gates.push(GateOp::BitReversal);
    Ok(CircuitPlan { m, d, gates })
}

/// Number of controlled-phase gates in the depth-`d` plan:
/// `Σ_{j=0}^{m-1} max(0, min(d - 1, m - j - 1))`.
pub fn gate_count(m: usize, d: usize) -> Result<u64> {
    check_depth(m, d)?;
    Ok((0..m).map(|j| (d - 1).min(m - j - 1) as u64).sum())
}

/// Controlled-phase count of the untruncated QFT, `m(m-1)/2`.
pub fn full_gate_count(m: usize) -> u64 {
    let m = m as u64;
    m * m.saturating_sub(1) / 2
}

impl CircuitPlan {
    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn controlled_phase_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, GateOp::ControlledPhase { .. }))
            .count()
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, GateOp::Hadamard { .. }))
            .count()
    }

    pub fn is_full(&self) -> bool {
        self.d == self.m
    }

    /// Applies the plan in place. The inverse runs the gates in reverse
    /// order with conjugated phases.
    pub fn apply_in_place(&self, state: &mut StateVector, direction: Direction) -> Result<()> {
        if state.num_qubits() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: state.num_qubits(),
            });
        }
        let sign = match direction {
            Direction::Forward => 1.0,
            Direction::Inverse => -1.0,
        };
        let mut step = |g: &GateOp| match *g {
            GateOp::Hadamard { target } => state.hadamard(target),
            GateOp::ControlledPhase { k, control, target } => {
                state.controlled_phase(control, target, sign * rotation_angle(k))
            }
            GateOp::BitReversal => state.bit_reverse(),
        };
        match direction {
            Direction::Forward => self.gates.iter().for_each(&mut step),
            Direction::Inverse => self.gates.iter().rev().for_each(&mut step),
        }
        Ok(())
    }

    /// Dense unitary of this plan, column `x` being the image of `|x>`.
    pub fn unitary(&self, direction: Direction) -> Result<DenseComplexMatrix> {
        if self.m > MAX_DENSE_QUBITS {
            return param_err(format!(
                "dense unitaries are limited to m <= {MAX_DENSE_QUBITS}"
            ));
        }
        let columns = (0..1usize << self.m)
            .map(|x| {
                let mut s = StateVector::basis(self.m, x)?;
                self.apply_in_place(&mut s, direction)?;
                Ok(s.amplitudes().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        DenseComplexMatrix::from_columns(&columns)
    }
}

/// Applies `plan` to a copy of `state`.
pub fn apply_plan(
    state: &StateVector,
    plan: &CircuitPlan,
    direction: Direction,
) -> Result<StateVector> {
    if plan.m > MAX_STATE_QUBITS {
        return param_err(format!(
            "cannot simulate more than {MAX_STATE_QUBITS} qubits"
        ));
    }
    let mut out = state.clone();
    plan.apply_in_place(&mut out, direction)?;
    Ok(out)
}

/// Reference QFT matrix with entry `(y, x) = e^{2πixy/N} / √N`.
pub fn full_qft_matrix(m: usize) -> Result<DenseComplexMatrix> {
    if m == 0 || m > MAX_DENSE_QUBITS {
        return param_err(format!(
            "reference matrix requires 1 <= m <= {MAX_DENSE_QUBITS}"
        ));
    }
    let n = 1usize << m;
    let scale = 1.0 / (n as f64).sqrt();
    Ok(DenseComplexMatrix::from_fn(n, |y, x| {
        // reduce xy mod N before forming the angle to keep it exact
        let e = (x * y) % n;
        Complex64::from_polar(scale, 2.0 * PI * e as f64 / n as f64)
    }))
}

// Text format:
//   m=<m> d=<d>
//   H <t> | CP <k> <c> <t> | BITREV

impl fmt::Display for CircuitPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={} d={}", self.m, self.d)?;
        for g in &self.gates {
            match g {
                GateOp::Hadamard { target } => writeln!(f, "H {target}")?,
                GateOp::ControlledPhase { k, control, target } => {
                    writeln!(f, "CP {k} {control} {target}")?
                }
                GateOp::BitReversal => writeln!(f, "BITREV")?,
            }
        }
        Ok(())
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn parse_index(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    match tok.map(str::parse::<usize>) {
        Some(Ok(v)) => Ok(v),
        _ => parse_err(line, format!("expected integer {what}")),
    }
}

impl FromStr for CircuitPlan {
    type Err = Error;

    /// Parses the text format and checks that it is exactly the canonical
    /// plan for its header.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = match lines.next() {
            Some(h) => h,
            None => return parse_err(1, "missing header"),
        };
        let mut m = None;
        let mut d = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("m", v)) => m = v.parse::<usize>().ok(),
                Some(("d", v)) => d = v.parse::<usize>().ok(),
                _ => return parse_err(hline, format!("unexpected header token {tok:?}")),
            }
        }
        let (m, d) = match (m, d) {
            (Some(m), Some(d)) => (m, d),
            _ => return parse_err(hline, "header must be `m=<m> d=<d>`"),
        };

        let mut gates = Vec::new();
        for (n, line) in lines {
            let mut toks = line.split_whitespace();
            let gate = match toks.next() {
                Some("H") => GateOp::Hadamard {
                    target: parse_index(toks.next(), n, "target")?,
                },
                Some("CP") => GateOp::ControlledPhase {
                    k: parse_index(toks.next(), n, "angle index")? as u32,
                    control: parse_index(toks.next(), n, "control")?,
                    target: parse_index(toks.next(), n, "target")?,
                },
                Some("BITREV") => GateOp::BitReversal,
                Some(other) => return parse_err(n, format!("unknown gate {other:?}")),
                None => unreachable!("blank lines are filtered"),
            };
            if toks.next().is_some() {
                return parse_err(n, "trailing tokens");
            }
            gates.push(gate);
        }

        let canonical = plan_pfa_tqft(m, d)?;
        if canonical.gates != gates {
            return parse_err(
                hline,
                format!("gate list is not the canonical depth-{d} plan for m={m}"),
            );
        }
        Ok(canonical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;
    use proptest::prelude::*;

    /// `(m-d+1)(d-1) + (d-1)(d-2)/2` for `d < m`.
    fn closed_form(m: usize, d: usize) -> u64 {
        ((m - d + 1) * (d - 1) + (d - 1) * (d.saturating_sub(2)) / 2) as u64
    }

    #[test]
    fn full_m5_has_ten_rotations() {
        let p = plan_pfa_tqft(5, 5).unwrap();
        assert_eq!(p.controlled_phase_count(), 10);
        assert_eq!(p.hadamard_count(), 5);
        assert_eq!(p.gates().last(), Some(&GateOp::BitReversal));
    }

    #[test]
    fn m5_depth3_enumeration() {
        // stage-by-stage: 2, 2, 2, 1, 0
        let p = plan_pfa_tqft(5, 3).unwrap();
        assert_eq!(p.controlled_phase_count(), 7);
        assert_eq!(gate_count(5, 3).unwrap(), 7);
        let ks: Vec<u32> = p
            .gates()
            .iter()
            .filter_map(|g| match g {
                GateOp::ControlledPhase { k, .. } => Some(*k),
                _ => None,
            })
            .collect();
        assert_eq!(ks, vec![2, 3, 2, 3, 2, 3, 2]);
    }

    #[test]
    fn table_counts() {
        assert_eq!(gate_count(30, 11).unwrap(), 245);
        assert_eq!(gate_count(30, 13).unwrap(), 282);
        assert_eq!(gate_count(30, 14).unwrap(), 299);
        assert_eq!(gate_count(30, 30).unwrap(), 435);
        assert_eq!(plan_pfa_tqft(30, 11).unwrap().controlled_phase_count(), 245);
        for m in 1..40 {
            assert_eq!(gate_count(m, 1).unwrap(), 0);
        }
    }

    #[test]
    fn invalid_depths_are_rejected() {
        assert!(plan_pfa_tqft(5, 0).is_err());
        assert!(plan_pfa_tqft(5, 6).is_err());
        assert!(gate_count(5, 6).is_err());
        assert!(gate_count(0, 0).is_err());
        assert!(plan_pfa_tqft(MAX_PLAN_QUBITS + 1, 2).is_err());
    }

    #[test]
    fn enumeration_matches_counts_up_to_32() {
        for m in 1..=32 {
            for d in 1..=m {
                let p = plan_pfa_tqft(m, d).unwrap();
                let g = gate_count(m, d).unwrap();
                assert_eq!(p.controlled_phase_count() as u64, g, "m={m} d={d}");
                assert_eq!(p.hadamard_count(), m);
                assert_eq!(
                    p.gates()
                        .iter()
                        .filter(|g| **g == GateOp::BitReversal)
                        .count(),
                    1
                );
                for gate in p.gates() {
                    if let GateOp::ControlledPhase { k, control, target } = *gate {
                        assert!(k >= 2 && k as usize <= d);
                        assert!(control != target && control < m && target < m);
                    }
                }
                if d < m {
                    assert_eq!(g, closed_form(m, d), "closed form m={m} d={d}");
                } else {
                    assert_eq!(g, full_gate_count(m));
                }
            }
        }
    }

    #[test]
    fn gate_count_monotone() {
        for m in 1..=40 {
            for d in 1..m {
                assert!(gate_count(m, d).unwrap() <= gate_count(m, d + 1).unwrap());
                assert!(gate_count(m, d).unwrap() <= gate_count(m + 1, d).unwrap());
            }
        }
    }

    #[test]
    fn full_plan_on_zero_is_uniform() {
        let plan = plan_pfa_tqft(6, 6).unwrap();
        let out = apply_plan(
            &StateVector::basis(6, 0).unwrap(),
            &plan,
            Direction::Forward,
        )
        .unwrap();
        let want = 1.0 / 8.0;
        for a in out.amplitudes() {
            assert!((a.re - want).abs() < 1e-14 && a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn reference_matrix_small_cases() {
        let h = full_qft_matrix(1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.get(0, 0).re - s).abs() < 1e-15);
        assert!((h.get(1, 1).re + s).abs() < 1e-15);
        let q = full_qft_matrix(2).unwrap();
        let i = Complex64::new(0.0, 1.0);
        for y in 0..4 {
            for x in 0..4 {
                let want = i.powu((x * y) as u32) / 2.0;
                assert!((q.get(y, x) - want).norm() < 1e-15);
            }
        }
        assert!(full_qft_matrix(9).is_err());
        assert!(full_qft_matrix(0).is_err());
    }

    #[test]
    fn reference_matrix_unitary() {
        for m in 1..=8 {
            let q = full_qft_matrix(m).unwrap();
            let g = q.adjoint().matmul(&q).unwrap();
            assert!(
                g.max_abs_diff(&DenseComplexMatrix::identity(1 << m)) < 1e-12,
                "m={m}"
            );
        }
    }

    #[test]
    fn full_plan_matches_reference_matrix() {
        for m in 1..=6 {
            let plan = plan_pfa_tqft(m, m).unwrap();
            let u = plan.unitary(Direction::Forward).unwrap();
            let want = full_qft_matrix(m).unwrap();
            assert!(u.max_abs_diff(&want) < 1e-10, "m={m}");
            let inv = plan.unitary(Direction::Inverse).unwrap();
            assert!(inv.max_abs_diff(&want.adjoint()) < 1e-10, "inverse m={m}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let plan = plan_pfa_tqft(3, 3).unwrap();
        let s = StateVector::basis(4, 0).unwrap();
        assert!(matches!(
            apply_plan(&s, &plan, Direction::Forward),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let plan = plan_pfa_tqft(5, 3).unwrap();
        let text = plan.to_string();
        assert!(text.starts_with("m=5 d=3\nH 0\nCP 2 1 0\nCP 3 2 0\nH 1\n"));
        assert!(text.ends_with("H 4\nBITREV\n"));
        assert_eq!(text.parse::<CircuitPlan>().unwrap(), plan);
    }

    #[test]
    fn text_rejects_noncanonical() {
        assert!("m=2 d=2\nH 0\nBITREV\n".parse::<CircuitPlan>().is_err());
        assert!("m=2 d=2\nH 0\nCP 2 1 0\nH 1\nSWAP 0 1\n"
            .parse::<CircuitPlan>()
            .is_err());
        assert!("d=2\nH 0\n".parse::<CircuitPlan>().is_err());
        assert!("".parse::<CircuitPlan>().is_err());
        assert!("m=2 d=3\n".parse::<CircuitPlan>().is_err());
        let err = "m=1 d=1\nH x\nBITREV".parse::<CircuitPlan>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn plans_are_norm_preserving(m in 1usize..=10, dfrac in 0.0f64..1.0, seed in any::<u64>()) {
            let d = 1 + ((m as f64) * dfrac) as usize;
            let d = d.min(m);
            let plan = plan_pfa_tqft(m, d).unwrap();
            let mut rng = SeededRng::new(seed);
            let v = StateVector::random(m, &mut rng).unwrap();
            let fwd = apply_plan(&v, &plan, Direction::Forward).unwrap();
            prop_assert!((fwd.norm() - v.norm()).abs() < 1e-12);
            let back = apply_plan(&fwd, &plan, Direction::Inverse).unwrap();
            prop_assert!(back.max_abs_diff(&v).unwrap() < 1e-10);
        }
    }
}
