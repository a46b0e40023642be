//! JSON-configured experiments: run seeded chains, write chain CSVs,
//! histograms, diagnostics and a hashed manifest.

mod config;
mod run;

pub use config::{ExperimentConfig, Init};
pub use run::{compare_samplers, emit_grid, run_experiment, ChainOutcome, Manifest, RunSummary};
