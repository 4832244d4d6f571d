//! Experiment registry (placeholder while modules are under construction).

use super::config::ExperimentConfig;
use super::report::ExperimentReport;
use crate::{FrontLabError, Result};

pub fn registry() -> Vec<&'static str> {
    vec![]
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    Err(FrontLabError::config(format!("unknown experiment `{}`", cfg.name)))
}
