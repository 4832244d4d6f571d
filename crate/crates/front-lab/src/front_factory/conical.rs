//! Conical (V-shaped) traveling fronts, computed by parabolic relaxation in
//! the comoving frame, and the rotated traveling subsolution built from
//! them.
//!
//! A V-front with half-angle `α` to the vertical axis travels vertically at
//! `c = c_f / sin α`; in the frame moving with that speed it is a steady
//! state of `u_t = Δu + c ∂₂u + f(u)`. Relaxation starts from the maximum
//! of the two planar fronts the V is asymptotic to (a subsolution, so the
//! approach is monotone) with all edges pinned to that initial trace.

use super::GridSpec;
use crate::interface_geometry::{extract_graph_interface, InterfaceSet};
use crate::nonlinearity::Nonlinearity;
use crate::rd_engine::{cfl_limit, evolve, BoundaryPolicy, EvolveOptions, ScalarField};
use crate::wave_profile::ProfileSolution;
use crate::{FrontLabError, Result};

/// A relaxed steady V-front in its comoving frame.
#[derive(Debug, Clone)]
pub struct ConicalFront {
    /// Half-angle to the vertical, in `(0, π/2)`.
    pub alpha: f64,
    /// Vertical frame speed `c = c_f / sin α`.
    pub vertical_speed: f64,
    /// Steady comoving field (level-1/2 corner asymptotes pass the origin).
    pub profile: ScalarField,
    /// The level-1/2 curve `x₂ = ψ(x₁)` sampled per grid column.
    pub shape_offset: Vec<[f64; 2]>,
    /// Sup-norm change over the last unit of relaxation time.
    pub relax_residual: f64,
    planar: ProfileSolution,
}

impl ConicalFront {
    /// Evaluate the front profile anywhere in the comoving plane: bicubic
    /// interpolation inside the relaxed window, the planar-front maximum of
    /// the two asymptotic arms outside (exact up to an exponentially small
    /// term in the distance to the apex).
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let u = &self.profile;
        let gx = (x1 - u.origin[0]) / u.h;
        let gy = (x2 - u.origin[1]) / u.h;
        if gx >= 1.0 && gy >= 1.0 && gx <= (u.nx - 3) as f64 && gy <= (u.ny - 3) as f64 {
            return bicubic(u, gx, gy).clamp(1e-300, 1.0);
        }
        self.planar_max(x1, x2)
    }

    /// The max of the two asymptotic planar fronts.
    pub fn planar_max(&self, x1: f64, x2: f64) -> f64 {
        let (sin_a, cos_a) = (self.alpha.sin(), self.alpha.cos());
        let a = self.planar.eval(x1 * cos_a + x2 * sin_a);
        let b = self.planar.eval(-x1 * cos_a + x2 * sin_a);
        a.max(b)
    }

    pub fn planar_profile(&self) -> &ProfileSolution {
        &self.planar
    }
}

/// Catmull-Rom weights at fractional position `s ∈ [0,1]`.
#[inline]
fn cr_weights(s: f64) -> [f64; 4] {
    let s2 = s * s;
    let s3 = s2 * s;
    [
        0.5 * (-s3 + 2.0 * s2 - s),
        0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
        0.5 * (-3.0 * s3 + 4.0 * s2 + s),
        0.5 * (s3 - s2),
    ]
}

fn bicubic(u: &ScalarField, gx: f64, gy: f64) -> f64 {
    let ix = (gx.floor() as usize).clamp(1, u.nx - 3);
    let iy = (gy.floor() as usize).clamp(1, u.ny - 3);
    let wx = cr_weights(gx - ix as f64);
    let wy = cr_weights(gy - iy as f64);
    let mut acc = 0.0;
    for (dy, wyv) in wy.iter().enumerate() {
        let row = (iy + dy - 1) * u.nx + ix - 1;
        let mut line = 0.0;
        for (dx, wxv) in wx.iter().enumerate() {
            line += wxv * u.values[row + dx];
        }
        acc += wyv * line;
    }
    acc
}

/// Relax the V-shaped front of half-angle `alpha` for the bistable term
/// `f` with planar pair `p` (`p.speed > 0` required).
///
/// Evolution runs in the comoving frame with drift `c_f/sin α`, starting
/// from `max(planar⁺, planar⁻)` (or from `warm`, resampled onto `grid`)
/// with all edges Dirichlet-frozen to the initial trace, until the field
/// changes by less than 1e-6 (sup norm) over one time unit. Exceeding
/// `relax_time` is an error carrying the last residual.
pub fn conical_front(
    f: &Nonlinearity,
    p: &ProfileSolution,
    alpha: f64,
    grid: &GridSpec,
    relax_time: f64,
) -> Result<ConicalFront> {
    conical_front_with_start(f, p, alpha, grid, relax_time, None)
}

/// Same as [`conical_front`], warm-started from an already relaxed front
/// (useful for grid-refinement studies).
pub fn conical_front_with_start(
    f: &Nonlinearity,
    p: &ProfileSolution,
    alpha: f64,
    grid: &GridSpec,
    relax_time: f64,
    warm: Option<&ConicalFront>,
) -> Result<ConicalFront> {
    if p.speed <= 0.0 {
        return Err(FrontLabError::domain(format!(
            "conical front construction needs c_f > 0, got {}",
            p.speed
        )));
    }
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(FrontLabError::domain(format!(
            "cone half-angle must lie in (0, π/2), got {alpha}"
        )));
    }
    let c = p.speed / alpha.sin();
    let (sin_a, cos_a) = (alpha.sin(), alpha.cos());
    let mut u = grid.field_2d();
    match warm {
        Some(w) => u.fill(|x, y| w.eval(x, y)),
        None => u.fill(|x, y| {
            p.eval(x * cos_a + y * sin_a).max(p.eval(-x * cos_a + y * sin_a))
        }),
    }
    let bc = BoundaryPolicy::frozen_from(&u);
    let dt = cfl_limit(grid.h, 2, f.max_abs_deriv());
    let opts = EvolveOptions { dt, t_end: 1.0, drift: c, snapshot_every: 0.0, clamp: true };

    let mut residual = f64::INFINITY;
    let mut elapsed = 0.0;
    while elapsed < relax_time {
        let snaps = evolve(&u, f, &bc, &opts)?;
        let next = snaps.into_iter().last().unwrap();
        residual = next.max_abs_diff(&u);
        u = next;
        elapsed += 1.0;
        if residual < 1e-6 {
            let shape_offset = extract_graph_interface(&u, 0.5).points;
            return Ok(ConicalFront {
                alpha,
                vertical_speed: c,
                profile: u,
                shape_offset,
                relax_residual: residual,
                planar: p.clone(),
            });
        }
    }
    Err(FrontLabError::numerics(format!(
        "conical front did not relax within t={relax_time}: last residual {residual:.3e}"
    )))
}

/// The rotated traveling subsolution `v̲(t, x) = ψ(x - c t (cos α, sin α))`
/// where `ψ` is the V-front rotated clockwise by `π/2 - α`, evaluated
/// pointwise.
///
/// The rotation puts one asymptotic arm of the level sets along the
/// positive horizontal axis and the other along `R₊(cos 2α, sin 2α)`.
pub fn rotated_v_eval(cf: &ConicalFront, t: f64, x1: f64, x2: f64) -> f64 {
    let (sin_a, cos_a) = (cf.alpha.sin(), cf.alpha.cos());
    let c = cf.vertical_speed;
    let (y1, y2) = (x1 - c * t * cos_a, x2 - c * t * sin_a);
    cf.eval(y1 * sin_a - y2 * cos_a, y1 * cos_a + y2 * sin_a)
}

/// Sample `v̲(t, ·)` on a grid.
pub fn rotated_v(cf: &ConicalFront, t: f64, grid: &GridSpec) -> ScalarField {
    let mut u = grid.field_2d();
    u.t = t;
    u.fill(|x, y| rotated_v_eval(cf, t, x, y));
    u
}
