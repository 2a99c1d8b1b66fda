//! Experiment runner for the `pertinency` library: JSON configurations in,
//! reports out as JSON, aligned tables or CSV.

pub mod config;
pub mod emit;
pub mod repro;
pub mod run;

pub use config::{parse_config, ConfigError, ExperimentConfig};
pub use run::{run_experiment, Report, RunOptions};
