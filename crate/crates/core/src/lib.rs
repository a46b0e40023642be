//! Langevin-type MCMC samplers with a stochastic, history-dependent
//! proposal scale, alongside classic MALA and HMC baselines.
//!
//! The crate is organised bottom-up:
//!
//! - [`prng`]: counter-based random streams, one per chain.
//! - [`targets`]: the particle-in-a-box eigenfunction density and Gaussian
//!   mixtures, each with log-density and gradient.
//! - [`adaptation`]: the stochastic scale update driving the adaptive sampler.
//! - [`samplers`]: proposals, the Metropolis-Hastings correction, leapfrog
//!   HMC, and the chain runner.
//! - [`diagnostics`]: autocorrelation, ESS, histograms, TV distance, mode
//!   coverage and empirical Fisher information.
//! - [`experiment`]: JSON-configured experiments writing CSV/JSON artifacts.

pub mod adaptation;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod prng;
pub mod samplers;
pub mod targets;

pub use error::{Error, Result};
pub use grid::Grid;
pub use prng::{split, RngStream};
pub use targets::{LogDensity, Target, TargetDensity};
