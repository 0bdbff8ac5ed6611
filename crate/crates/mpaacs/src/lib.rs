//! Numerics for multi-photon-added amplified coherent states: the states
//! `a†^m g^n |alpha>` (up to normalization) produced by adding `m` photons to
//! a coherent seed around a noiseless phase-insensitive amplifier of gain
//! `g >= 1`.
//!
//! The crate computes photon-number statistics, Wigner functions, and
//! amplifier figures of merit (effective gain, quadrature variances,
//! equivalent input noise), each through at least two independent routes so
//! results can be cross-checked at runtime. See [`verify::run_all`] for the
//! full self-check suite.
//!
//! ```
//! use mpaacs::{Complex64, MpaacsParams};
//!
//! let params = MpaacsParams::new(Complex64::new(1.0, 0.0), 2.0, 2).unwrap();
//! let state = mpaacs::state::fock_coefficients(&params, 1e-12).unwrap();
//!
//! // Two added photons empty the lowest Fock components.
//! assert_eq!(state.coeff(1).norm(), 0.0);
//! assert!((state.probability_sum() - 1.0).abs() < 1e-9);
//! ```

mod displacement;
pub mod error;
mod exec;
pub mod generating;
pub mod metrics;
pub mod special;
pub mod state;
pub mod verify;
pub mod wigner;

pub use error::Error;
pub use exec::Execution;
pub use num_complex::Complex64;
pub use state::MpaacsParams;
