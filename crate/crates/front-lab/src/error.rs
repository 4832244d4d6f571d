//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrontLabError {
    /// A parameter violates an operation precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to converge or bracket.
    #[error("numerics error: {0}")]
    Numerics(String),

    /// Grid/field mismatch or invalid grid description.
    #[error("grid error: {0}")]
    Grid(String),

    /// The time integrator produced a non-finite value.
    #[error("non-finite value at t={t}, node ({i},{j}): {value}")]
    NonFinite { t: f64, i: usize, j: usize, value: f64 },

    /// Configuration parsing or validation failure.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FrontLabError {
    pub fn domain(msg: impl Into<String>) -> Self {
        FrontLabError::Domain(msg.into())
    }
    pub fn numerics(msg: impl Into<String>) -> Self {
        FrontLabError::Numerics(msg.into())
    }
    pub fn grid(msg: impl Into<String>) -> Self {
        FrontLabError::Grid(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        FrontLabError::Config(msg.into())
    }
}
