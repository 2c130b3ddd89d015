//! Experiment runner for the pvN/bvN eigensolvers: INI configs and presets,
//! single solves with oracle comparison, e_cut search, ħ-efficiency sweeps
//! and phase-space mask export.

pub mod config;
pub mod ecut;
pub mod error;
pub mod presets;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::ExperimentConfig;
pub use ecut::{find_ecut, EcutSelection};
pub use error::{BenchError, Result};
pub use presets::{load_config, preset};
pub use report::ResultDocument;
pub use runner::{emit_phase_mask, run_experiment, RunOptions};
pub use sweep::{sweep_hbar, EfficiencyPoint, SweepReport};
