use num_complex::Complex64;
use rand::Rng;

use crate::error::{param_err, Error, Result};

/// Largest register a statevector may hold (2^24 amplitudes, 256 MiB).
pub const MAX_STATE_QUBITS: usize = 24;

const NORM_TOLERANCE: f64 = 1e-10;

/// Normalised amplitudes of an `m`-qubit register.
///
/// Basis index `x` encodes qubit `q` in bit `m - 1 - q`, so qubit 0 is the
/// most significant bit. This is the ordering in which the QFT circuit maps
/// `|x>` onto the Fourier basis after the final bit reversal.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    m: usize,
    amps: Vec<Complex64>,
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 || m > MAX_STATE_QUBITS {
        return param_err(format!(
            "register size must be in 1..={MAX_STATE_QUBITS}, got {m}"
        ));
    }
    Ok(())
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(m: usize, index: usize) -> Result<Self> {
        check_size(m)?;
        let n = 1usize << m;
        if index >= n {
            return param_err(format!("basis index {index} out of range for {m} qubits"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { m, amps })
    }

    /// Wraps amplitudes that must already be normalised to within 1e-10.
    pub fn from_amplitudes(m: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(m)?;
        if amps.len() != 1usize << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                actual: amps.len(),
            });
        }
        let state = Self { m, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return param_err(format!("amplitudes have norm {norm}, expected 1"));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(m: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_size(m)?;
        if amps.len() != 1usize << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                actual: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return param_err("cannot normalise a zero or non-finite vector");
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { m, amps })
    }

    /// Random state with real and imaginary parts drawn uniformly from [-1, 1].
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        check_size(m)?;
        let amps = (0..1usize << m)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self::normalized(m, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest per-amplitude deviation from `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: other.m,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn bit(&self, qubit: usize) -> usize {
        debug_assert!(qubit < self.m);
        1 << (self.m - 1 - qubit)
    }

    pub(crate) fn hadamard(&mut self, qubit: usize) {
        let stride = self.bit(qubit);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * s;
                *b = (x - y) * s;
            }
        }
    }

    /// Multiplies every amplitude with both qubits set by `e^{i angle}`.
    pub(crate) fn controlled_phase(&mut self, control: usize, target: usize, angle: f64) {
        let mask = self.bit(control) | self.bit(target);
        let phase = Complex64::from_polar(1.0, angle);
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if idx & mask == mask {
                *a *= phase;
            }
        }
    }

    /// Relabels amplitudes by bit-reversed index (an involution).
    pub(crate) fn bit_reverse(&mut self) {
        let shift = usize::BITS - self.m as u32;
        for i in 0..self.amps.len() {
            let j = i.reverse_bits() >> shift;
            if j > i {
                self.amps.swap(i, j);
            }
        }
    }
}
