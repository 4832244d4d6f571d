//! Numerical laboratory for bistable reaction-diffusion fronts.
//!
//! The crate simulates `u_t = Δu + f(u)` for reaction terms `f` with two
//! stable states 0 and 1, and measures the geometry of the moving interfaces:
//!
//! * [`nonlinearity`] — the reaction-term families (cubic, quintic, custom)
//!   and their analysis (zeros, stability, balance integral);
//! * [`wave_profile`] — the 1D traveling-wave pair `(c_f, φ_f)` computed by
//!   shooting, profile evaluation with exponential tails, and sub-front
//!   speed ladders for multistable terms;
//! * [`rd_engine`] — explicit finite-difference time stepping on uniform
//!   1D/2D grids, with an optional vertical drift (comoving frame), boundary
//!   policies, and residual evaluation;
//! * [`interface_geometry`] — level-set extraction, the three set distances
//!   (closest-pair, d-tilde, Hausdorff), global mean-speed estimation,
//!   planarity fits and transition-front certification;
//! * [`front_factory`] — initial data and front constructions: planar/step/
//!   ball data, relaxed conical (V-shaped) fronts, the rotated traveling
//!   subsolution, supersolution residual checks, reference interfaces and
//!   the non-standard merging-front run;
//! * [`lab_cli`] — the experiment registry, config parsing and reports
//!   behind the `front-lab` binary.

pub mod error;
pub mod front_factory;
pub mod interface_geometry;
pub mod lab_cli;
pub mod nonlinearity;
pub mod numerics;
pub mod rd_engine;
pub mod wave_profile;

pub use error::FrontLabError;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, FrontLabError>;
