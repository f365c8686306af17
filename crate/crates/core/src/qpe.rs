//! Exact phase-estimation statistics.
//!
//! The control register after phase kickback is
//! `(1/√N) Σ_j e^{2πijφ} |j>`; applying the inverse (adjoint) of a
//! truncated QFT plan and squaring amplitudes gives the outcome distribution.
//! Distributions are computed exactly; shot sampling is a separate layer.

use std::f64::consts::PI;

use log::warn;
use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param_err, Error, Result};
use crate::numerics::{circular_distance, wrap_phase, Complex64, SeededRng, StateVector};
use crate::qft::{plan_pfa_tqft, CircuitPlan, Direction};

/// Largest register for distribution experiments.
pub const MAX_DISTRIBUTION_QUBITS: usize = 20;

/// Probability mass over the `2^m` measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    m: usize,
    probs: Vec<f64>,
}

impl PhaseDistribution {
    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Most likely outcome, lowest index on ties.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (y, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = y;
            }
        }
        best
    }
}

fn check_register(m: usize) -> Result<()> {
    if m == 0 || m > MAX_DISTRIBUTION_QUBITS {
        return param_err(format!(
            "register size must be in 1..={MAX_DISTRIBUTION_QUBITS}, got {m}"
        ));
    }
    Ok(())
}

fn normalize_phase(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return param_err("phase must be finite");
    }
    if !(0.0..1.0).contains(&phi) {
        warn!("phase {phi} outside [0, 1); reducing modulo 1");
    }
    Ok(wrap_phase(phi))
}

/// Control-register state after kickback of eigenphase `phi`.
pub fn kickback_state(phi: f64, m: usize) -> Result<StateVector> {
    check_register(m)?;
    let phi = normalize_phase(phi)?;
    let n = 1usize << m;
    let scale = 1.0 / (n as f64).sqrt();
    let amps = (0..n)
        .map(|j| {
            // fractional part of jφ keeps the angle small
            let turns = (j as f64 * phi).fract();
            Complex64::from_polar(scale, 2.0 * PI * turns)
        })
        .collect();
    StateVector::from_amplitudes(m, amps)
}

/// Outcome distribution for a prebuilt plan (shared across many phases).
pub fn phase_distribution_for_plan(phi: f64, plan: &CircuitPlan) -> Result<PhaseDistribution> {
    let m = plan.num_qubits();
    let mut state = kickback_state(phi, m)?;
    plan.apply_in_place(&mut state, Direction::Inverse)?;
    Ok(PhaseDistribution {
        m,
        probs: state.probabilities(),
    })
}

/// Outcome distribution of QPE with the inverse of the depth-`d` plan.
/// `d = m` gives the full-QFT distribution.
pub fn phase_distribution(phi: f64, m: usize, d: usize) -> Result<PhaseDistribution> {
    check_register(m)?;
    let plan = plan_pfa_tqft(m, d)?;
    phase_distribution_for_plan(phi, &plan)
}

/// Full-QFT distribution straight from the Fejér kernel,
/// `sin²(πNΔ) / (N² sin²(πΔ))` with `Δ = φ - y/N`, no circuit involved.
pub fn closed_form_full_distribution(phi: f64, m: usize) -> Result<PhaseDistribution> {
    check_register(m)?;
    let phi = normalize_phase(phi)?;
    let n = 1usize << m;
    let nf = n as f64;
    let probs = (0..n)
        .map(|y| {
            let delta = phi - y as f64 / nf;
            let den = (PI * delta).sin();
            if den == 0.0 {
                1.0
            } else {
                let num = (PI * nf * delta).sin();
                (num * num) / (nf * nf * den * den)
            }
        })
        .collect();
    Ok(PhaseDistribution { m, probs })
}

/// Total variation distance `½ Σ |p - q|`.
pub fn tvd(p: &PhaseDistribution, q: &PhaseDistribution) -> Result<f64> {
    if p.m != q.m {
        return Err(Error::DimensionMismatch {
            expected: p.m,
            actual: q.m,
        });
    }
    Ok(0.5
        * p.probs
            .iter()
            .zip(&q.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Phases at which TVD maxima are searched: `random` seeded uniform draws
/// followed by a `grid` of cell midpoints `(i + ½) / grid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseSampling {
    pub random: usize,
    pub seed: u64,
    pub grid: usize,
}

impl Default for PhaseSampling {
    fn default() -> Self {
        Self {
            random: 500,
            seed: 42,
            grid: 4096,
        }
    }
}

impl PhaseSampling {
    pub fn random(count: usize, seed: u64) -> Self {
        Self {
            random: count,
            seed,
            grid: 0,
        }
    }

    pub fn grid(points: usize) -> Self {
        Self {
            random: 0,
            seed: 0,
            grid: points,
        }
    }

    pub fn phases(&self) -> Result<Vec<f64>> {
        if self.random == 0 && self.grid == 0 {
            return param_err("phase sampling is empty");
        }
        let mut rng = SeededRng::new(self.seed);
        let mut out: Vec<f64> = (0..self.random).map(|_| rng.uniform()).collect();
        let g = self.grid as f64;
        out.extend((0..self.grid).map(|i| (i as f64 + 0.5) / g));
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxTvd {
    pub d: usize,
    pub value: f64,
    /// First phase (in sampling order) attaining the maximum.
    pub phase: f64,
}

/// Maximum TVD between full and depth-`d` distributions over `sampling`.
pub fn max_tvd(m: usize, d: usize, sampling: &PhaseSampling) -> Result<MaxTvd> {
    Ok(max_tvd_profile(m, &[d], sampling)?[0])
}

/// [`max_tvd`] for several depths at once, computing the full distribution
/// once per phase. Phases are evaluated in parallel; the reduction runs in
/// sampling order so the result does not depend on scheduling.
pub fn max_tvd_profile(
    m: usize,
    depths: &[usize],
    sampling: &PhaseSampling,
) -> Result<Vec<MaxTvd>> {
    check_register(m)?;
    if depths.is_empty() {
        return param_err("no truncation depths requested");
    }
    let phases = sampling.phases()?;
    let full = plan_pfa_tqft(m, m)?;
    let plans = depths
        .iter()
        .map(|&d| plan_pfa_tqft(m, d))
        .collect::<Result<Vec<_>>>()?;

    let per_phase = phases
        .par_iter()
        .map(|&phi| {
            let p = phase_distribution_for_plan(phi, &full)?;
            plans
                .iter()
                .map(|plan| {
                    if plan.is_full() {
                        Ok(0.0)
                    } else {
                        tvd(&p, &phase_distribution_for_plan(phi, plan)?)
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(depths
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut best = MaxTvd {
                d,
                value: per_phase[0][i],
                phase: phases[0],
            };
            for (phi, row) in phases.iter().zip(&per_phase).skip(1) {
                if row[i] > best.value {
                    best.value = row[i];
                    best.phase = *phi;
                }
            }
            best
        })
        .collect())
}

/// How a success probability (or an estimate) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EvalMode {
    Exact,
    Sampled { shots: usize, seed: u64 },
}

/// Outcome `y` is a success when the circular distance from `y/N` to `phi`
/// is at most `2^{-m}` (closed window).
pub fn is_success(y: usize, phi: f64, m: usize) -> bool {
    let n = (1usize << m) as f64;
    circular_distance(y as f64 / n, phi) <= (1.0 / n) * (1.0 + 1e-12)
}

/// Draws `shots` outcomes from `dist`.
pub fn sample_outcomes(
    dist: &PhaseDistribution,
    shots: usize,
    rng: &mut SeededRng,
) -> Result<Vec<usize>> {
    if shots == 0 {
        return param_err("shots must be positive");
    }
    let index = WeightedIndex::new(&dist.probs)
        .map_err(|e| Error::Parameter(format!("distribution cannot be sampled: {e}")))?;
    Ok((0..shots).map(|_| index.sample(rng)).collect())
}

/// Success probability of an already computed distribution.
pub fn success_probability_of(dist: &PhaseDistribution, phi: f64, mode: EvalMode) -> Result<f64> {
    let phi = wrap_phase(phi);
    let m = dist.m;
    match mode {
        EvalMode::Exact => Ok(dist
            .probs
            .iter()
            .enumerate()
            .filter(|(y, _)| is_success(*y, phi, m))
            .map(|(_, p)| p)
            .sum()),
        EvalMode::Sampled { shots, seed } => {
            let mut rng = SeededRng::new(seed);
            let hits = sample_outcomes(dist, shots, &mut rng)?
                .into_iter()
                .filter(|&y| is_success(y, phi, m))
                .count();
            Ok(hits as f64 / shots as f64)
        }
    }
}

/// `P[|φ̂ - φ| <= 2^{-m}]` under depth-`d` truncated QPE.
pub fn success_probability(phi: f64, m: usize, d: usize, mode: EvalMode) -> Result<f64> {
    if let EvalMode::Sampled { shots: 0, .. } = mode {
        return param_err("shots must be positive");
    }
    let dist = phase_distribution(phi, m, d)?;
    success_probability_of(&dist, phi, mode)
}
