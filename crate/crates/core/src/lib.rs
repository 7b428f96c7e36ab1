//! Thermodynamic formalism for skew-periodic ℤ-extensions of
//! piecewise-linear expanding interval maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`]: branch models, words, cylinder-constant potentials,
//!   Birkhoff sums and the range of asymptotic step averages.
//! * [`pressure`]: classical pressure, Gibbs measures and the Bowen root.
//! * [`fibre`]: fibre-induced pressure, corridor partition sums and
//!   recurrence diagnostics.
//! * [`spectrum`]: the α-Poincaré exponents by three independent routes,
//!   spectrum sweeps, dimension gaps and closed-form oracles.
//! * [`sim`]: orbit sampling, recurrence statistics and interval-map
//!   iteration.
//! * [`model_file`]: the JSON model format and built-in model names.
//! * [`verify`]: the cross-method invariant suite.
//! * [`cli`]: the batch front end behind the `pressurelab` binary.

pub mod cli;
pub mod error;
pub mod fibre;
pub mod model_file;
pub mod pressure;
pub mod sim;
pub mod solve;
pub mod spectrum;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
