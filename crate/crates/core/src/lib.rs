//! Phase-fidelity-aware truncated quantum Fourier transforms.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: complex statevectors, a cyclic Jacobi eigensolver, dense
//!   complex matrices, a seeded PRNG and circular phase distance.
//! * [`qft`]: depth-truncated QFT circuit plans, exact gate counts and
//!   gate-by-gate application (forward and inverse).
//! * [`qpe`]: exact phase-estimation outcome distributions, total variation
//!   distances, success probabilities and shot sampling.
//! * [`calibration`]: hardware design rules (`d*`, error bounds, the
//!   three-term RMSE model, the noise/truncation crossover) and a platform
//!   registry.
//! * [`tfim`]: the open-chain transverse-field Ising benchmark and an
//!   end-to-end eigenphase-estimation experiment.
//!
//! ```
//! use pfa_tqft::{calibration, qft};
//!
//! let d = calibration::d_star(3e-3).unwrap();
//! assert_eq!(d, 11);
//! assert_eq!(qft::gate_count(30, d).unwrap(), 245);
//! ```

pub mod calibration;
mod error;
pub mod numerics;
pub mod qft;
pub mod qpe;
pub mod tfim;

pub use error::{Error, Result};
