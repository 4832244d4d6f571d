//! Experiment registry, configuration files and report generation.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{parse_config, ExperimentConfig, Resolution};
pub use experiments::{registry, run_experiment};
pub use report::{write_report, CriterionResult, ExperimentReport};
