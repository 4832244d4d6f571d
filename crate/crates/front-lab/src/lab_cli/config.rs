//! Experiment configuration files: a TOML subset with top-level scalars
//! and one `[params]` table for experiment-specific values. Unknown keys
//! are errors; parse errors carry line numbers.

use crate::{FrontLabError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Resolution profile: smoke halves cost, full is the calibrated scale
/// (h halved, domain doubled relative to smoke).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Smoke,
    #[default]
    Full,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Registry name, e.g. `exp_spreading`.
    pub name: String,
    /// Reaction term, e.g. `cubic(0.3)` or `quintic(0.2, 0.8, 8.0)`.
    pub f: String,
    #[serde(default)]
    pub resolution: Resolution,
    /// Grid spacing override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Time step override (defaults to the CFL limit).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    /// Seed for randomized property suites.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    /// Experiment-specific parameters (alpha, r, epsilon, theta, levels...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn new(name: &str, f: &str) -> Self {
        ExperimentConfig {
            name: name.to_string(),
            f: f.to_string(),
            resolution: Resolution::Full,
            h: None,
            dt: None,
            t_end: None,
            snapshot_every: None,
            seed: 0,
            out_dir: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }
}

/// Parse a configuration file. Missing required keys and unknown keys are
/// reported as errors; TOML syntax errors carry line/column positions.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    // Distinguish the "missing required key" case for a friendlier message.
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| FrontLabError::config(e.to_string()))?;
    for key in ["name", "f"] {
        if !table.contains_key(key) {
            return Err(FrontLabError::config(format!("missing required key {key}")));
        }
    }
    let cfg: ExperimentConfig = toml::from_str(text)
        .map_err(|e| FrontLabError::config(e.to_string()))?;
    crate::nonlinearity::parse_spec(&cfg.f)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_round_trips() {
        let text = "name = \"exp_profile\"\nf = \"cubic(0.3)\"\n";
        let cfg = parse_config(text).unwrap();
        let cfg2 = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn full_config_round_trips() {
        let mut cfg = ExperimentConfig::new("exp_nonstandard", "cubic(0.3)");
        cfg.h = Some(0.25);
        cfg.t_end = Some(120.0);
        cfg.seed = 42;
        cfg.out_dir = Some("runs/ns".into());
        cfg = cfg.with_param("alpha", 1.0472).with_param("n", 60.0);
        let cfg2 = parse_config(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn missing_f_key() {
        let err = parse_config("name = \"exp_profile\"\n").unwrap_err();
        assert!(err.to_string().contains("missing required key f"), "{err}");
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = parse_config("name = \"x\"\nf = \"cubic(0.3)\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_config("name = \"x\"\nf = = \"cubic(0.3)\"\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn bad_reaction_spec_rejected() {
        assert!(parse_config("name = \"x\"\nf = \"cubic(2.0)\"\n").is_err());
    }
}
