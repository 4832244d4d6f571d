//! Initial conditions and front constructions: planar, step and ball data,
//! relaxed conical (V-shaped) fronts, the rotated traveling subsolution,
//! supersolution residual checks, piecewise-linear reference interfaces and
//! the non-standard merging-front run.

mod conical;
mod nonstandard;
mod supersolution;

pub use conical::{conical_front, rotated_v, rotated_v_eval, ConicalFront};
pub use nonstandard::{build_nonstandard, NonstandardRun};
pub use supersolution::{check_supersolution, SupersolutionReport};

use crate::interface_geometry::InterfaceSet;
use crate::rd_engine::ScalarField;
use crate::wave_profile::ProfileSolution;
use crate::{FrontLabError, Result};

/// Grid description for constructed fields.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: [f64; 2],
}

impl GridSpec {
    pub fn centered_2d(half_width: f64, half_height: f64, h: f64) -> Self {
        let nx = 2 * (half_width / h).round() as usize + 1;
        let ny = 2 * (half_height / h).round() as usize + 1;
        GridSpec {
            nx,
            ny,
            h,
            origin: [-((nx - 1) as f64) * 0.5 * h, -((ny - 1) as f64) * 0.5 * h],
        }
    }

    pub fn line(n: usize, h: f64, origin: f64) -> Self {
        GridSpec { nx: n, ny: 1, h, origin: [origin, 0.0] }
    }

    pub fn field_2d(&self) -> ScalarField {
        ScalarField::new_2d(self.nx, self.ny, self.h, self.origin)
    }
}

/// Planar front data `u(x) = φ(x·e + ξ)`.
pub fn planar_field(p: &ProfileSolution, e: [f64; 2], xi: f64, grid: &GridSpec) -> ScalarField {
    let norm = (e[0] * e[0] + e[1] * e[1]).sqrt();
    assert!((norm - 1.0).abs() < 1e-12, "direction must be a unit vector");
    let mut u = grid.field_2d();
    u.fill(|x, y| p.eval(x * e[0] + y * e[1] + xi));
    u
}

/// Which of the two one-dimensional step profiles to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepVariant {
    /// `ϑ` for `y ≤ 0`, `0` for `y > 0`.
    Lower,
    /// `1` for `y ≤ 0`, `ϑ` for `y > 0`.
    Upper,
}

/// Two-level step data on a 1D grid, switching at the node nearest 0.
pub fn step_field(theta: f64, variant: StepVariant, grid: &GridSpec) -> Result<ScalarField> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(FrontLabError::domain(format!("step level must lie in (0,1), got {theta}")));
    }
    let mut u = ScalarField::new_1d(grid.nx, grid.h, grid.origin[0]);
    for i in 0..grid.nx {
        let y = u.x1(i);
        u.values[i] = match variant {
            StepVariant::Lower => {
                if y <= 0.0 {
                    theta
                } else {
                    0.0
                }
            }
            StepVariant::Upper => {
                if y <= 0.0 {
                    1.0
                } else {
                    theta
                }
            }
        };
    }
    Ok(u)
}

/// Radial indicator data: `inside` for `|x| < R`, `outside` for `|x| ≥ R`.
/// Covers both the expanding-ball and the shrinking-hole initial conditions.
pub fn ball_field(inside: f64, outside: f64, radius: f64, grid: &GridSpec) -> Result<ScalarField> {
    if radius <= 2.0 * grid.h {
        return Err(FrontLabError::domain(format!(
            "ball radius {radius} must exceed two grid cells (h={})",
            grid.h
        )));
    }
    let mut u = grid.field_2d();
    u.fill(|x, y| if (x * x + y * y).sqrt() < radius { inside } else { outside });
    Ok(u)
}

/// The exact piecewise-linear reference interfaces of the non-standard
/// front, clipped to `|x₁| ≤ x_extent`.
///
/// For `t ≤ 0`: two oblique half-lines joined by the horizontal segment
/// between the kinks `P^{l,r} = (∓ c t cos α, c_f t)` (`c = c_f/sin α`).
/// For `t > 0`: the V-graph `x₂ = |tan 2α| |x₁| + c_f t / |cos 2α|`.
pub fn reference_interfaces(t: f64, alpha: f64, c_f: f64, x_extent: f64) -> InterfaceSet {
    let c = c_f / alpha.sin();
    let mut pts: Vec<[f64; 2]> = Vec::new();
    if t <= 0.0 {
        let px = -c * t * alpha.cos(); // ≥ 0; the right kink abscissa
        let py = c_f * t;
        // Left arm direction (cos 2α, sin 2α) from the left kink.
        let (dx, dy) = ((2.0 * alpha).cos(), (2.0 * alpha).sin());
        // Arm parameter to reach the lateral clip.
        let s_clip = ((x_extent - px) / -dx).max(0.0);
        pts.push([-px + s_clip * dx, py + s_clip * dy]);
        pts.push([-px, py]);
        if px > 0.0 {
            pts.push([px, py]);
        }
        pts.push([px - s_clip * dx, py + s_clip * dy]);
    } else {
        let slope = (2.0 * alpha).tan().abs();
        let apex = c_f * t / (2.0 * alpha).cos().abs();
        pts.push([-x_extent, slope * x_extent + apex]);
        pts.push([0.0, apex]);
        pts.push([x_extent, slope * x_extent + apex]);
    }
    let segments = (1..pts.len()).map(|k| [k - 1, k]).collect();
    InterfaceSet { t, level: 0.5, points: pts, segments }
}
