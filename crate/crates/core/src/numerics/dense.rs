use num_complex::Complex64;

use super::eigen::{eigendecompose, SymmetricMatrix, MAX_EIGEN_DIM};
use crate::error::{param_err, Error, Result};

/// Square complex matrix, row-major. Only used for small reference
/// computations (dense unitaries for `m <= 8`, operator norms).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        if columns.iter().any(|c| c.len() != dim) {
            return param_err("columns must be square");
        }
        Ok(Self::from_fn(dim, |r, c| columns[c][r]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok(self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Operator 2-norm (largest singular value).
    ///
    /// The Hermitian Gram matrix `G = M†M = A + iB` is embedded as the real
    /// symmetric block matrix `[[A, -B], [B, A]]`, whose spectrum is that of
    /// `G` with every eigenvalue doubled, and diagonalised with Jacobi.
    pub fn spectral_norm(&self) -> Result<f64> {
        let n = self.dim;
        if 2 * n > MAX_EIGEN_DIM {
            return param_err(format!("matrix order {n} too large for a dense norm"));
        }
        let gram = self.adjoint().matmul(self)?;
        let embedded = SymmetricMatrix::from_upper(2 * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            let g = gram.get(ri, rj);
            // Hermitian: Re(G) symmetric, Im(G) antisymmetric
            match (bi, bj) {
                (0, 0) | (1, 1) => g.re,
                (0, 1) => -g.im,
                _ => g.im,
            }
        });
        let eig = eigendecompose(&embedded)?;
        let top = eig.values.last().copied().unwrap_or(0.0);
        Ok(top.max(0.0).sqrt())
    }
}
