//! Numerical kernels shared by the circuit, estimation and model code.

mod dense;
mod eigen;
mod phase;
mod rng;
mod state;

pub use dense::DenseComplexMatrix;
pub use eigen::{eigendecompose, Eigen, SymmetricMatrix, MAX_EIGEN_DIM};
pub use num_complex::Complex64;
pub use phase::{circular_distance, wrap_phase};
pub use rng::SeededRng;
pub use state::{StateVector, MAX_STATE_QUBITS};
