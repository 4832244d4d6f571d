//! Grid residual check of the half-plane supersolution
//! `v̄(t,x) = min( v̲(t + σ e^{δt}, x) + δ e^{δ(x₁+t)}, 1 )`.
//!
//! On `{x₁ ≤ 0}` with the Neumann edge at `x₁ = 0`, a supersolution must
//! satisfy `N̄ = v̄_t - Δv̄ - f(v̄) ≥ 0` where `v̄ < 1`, and `v̄_{x₁} ≥ 0` on
//! the boundary. Both are evaluated by second-order differences on a
//! space-time sample grid; the pass threshold absorbs the truncation error
//! of a true smooth supersolution sampled on that grid.

use super::conical::{rotated_v_eval, ConicalFront};
use super::GridSpec;
use crate::nonlinearity::Nonlinearity;
use crate::{FrontLabError, Result};

#[derive(Debug, Clone)]
pub struct SupersolutionReport {
    pub sigma: f64,
    pub delta: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub h: f64,
    pub dt: f64,
    /// `min N̄` over interior space-time nodes with `v̄ < 1`.
    pub min_interior_residual: f64,
    /// `min v̄_{x₁}` over boundary nodes (`x₁ = 0`) with `v̄ < 1`.
    pub min_boundary_derivative: f64,
    /// Truncation allowance `10 (h² + dt)`.
    pub tol: f64,
    pub pass: bool,
}

/// Assemble `v̄` on `grid × [t_lo, t_hi]` (time step `dt`) and report the
/// worst interior residual and boundary derivative. Report-only: never
/// fails on a negative residual, only on invalid inputs.
pub fn check_supersolution(
    cf: &ConicalFront,
    f: &Nonlinearity,
    sigma: f64,
    delta: f64,
    t_lo: f64,
    t_hi: f64,
    grid: &GridSpec,
    dt: f64,
) -> Result<SupersolutionReport> {
    if sigma <= 0.0 || delta <= 0.0 {
        return Err(FrontLabError::domain("supersolution parameters must be positive"));
    }
    if !(t_hi < 0.0 && t_lo < t_hi) {
        return Err(FrontLabError::domain("need t_lo < t_hi < 0"));
    }
    let right_edge = grid.origin[0] + (grid.nx - 1) as f64 * grid.h;
    if right_edge.abs() > 1e-9 {
        return Err(FrontLabError::grid(format!(
            "supersolution grid must end on the Neumann line x1=0, right edge is {right_edge}"
        )));
    }
    if dt <= 0.0 {
        return Err(FrontLabError::domain("time sample step must be positive"));
    }

    let (nx, ny, h) = (grid.nx, grid.ny, grid.h);
    let n_nodes = nx * ny;
    let vbar_level = |t: f64| -> Vec<f64> {
        let s = t + sigma * (delta * t).exp();
        let mut level = vec![0.0; n_nodes];
        for j in 0..ny {
            let y = grid.origin[1] + j as f64 * h;
            for i in 0..nx {
                let x = grid.origin[0] + i as f64 * h;
                let w = rotated_v_eval(cf, s, x, y) + delta * (delta * (x + t)).exp();
                level[i + j * nx] = w.min(1.0);
            }
        }
        level
    };

    let n_levels = ((t_hi - t_lo) / dt).round() as usize + 1;
    let inv_h2 = 1.0 / (h * h);
    let mut min_interior = f64::INFINITY;
    let mut min_boundary = f64::INFINITY;

    let mut prev = vbar_level(t_lo);
    let mut mid = vbar_level(t_lo + dt);
    for k in 1..n_levels - 1 {
        let t = t_lo + k as f64 * dt;
        let next = vbar_level(t + dt);
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let idx = i + j * nx;
                let v = mid[idx];
                if v >= 1.0 {
                    continue;
                }
                let vt = (next[idx] - prev[idx]) / (2.0 * dt);
                let lap = (mid[idx - 1] + mid[idx + 1] + mid[idx - nx] + mid[idx + nx]
                    - 4.0 * v)
                    * inv_h2;
                let res = vt - lap - f.eval_clamped(v);
                min_interior = min_interior.min(res);
            }
        }
        // One-sided x1-derivative on the boundary column.
        for j in 0..ny {
            let idx = nx - 1 + j * nx;
            if mid[idx] >= 1.0 {
                continue;
            }
            let d = (3.0 * mid[idx] - 4.0 * mid[idx - 1] + mid[idx - 2]) / (2.0 * h);
            min_boundary = min_boundary.min(d);
        }
        prev = mid;
        mid = next;
    }

    let tol = 10.0 * (h * h + dt);
    Ok(SupersolutionReport {
        sigma,
        delta,
        t_lo,
        t_hi,
        h,
        dt,
        min_interior_residual: min_interior,
        min_boundary_derivative: min_boundary,
        tol,
        pass: min_interior >= -tol && min_boundary >= -tol,
    })
}

/// Grid search over supersolution parameters; returns the first passing
/// report together with every candidate tried.
pub fn search_supersolution(
    cf: &ConicalFront,
    f: &Nonlinearity,
    sigmas: &[f64],
    deltas: &[f64],
    t_windows: &[(f64, f64)],
    grid: &GridSpec,
    dt: f64,
) -> Result<(Option<SupersolutionReport>, Vec<SupersolutionReport>)> {
    let mut tried = Vec::new();
    for &(t_lo, t_hi) in t_windows {
        for &sigma in sigmas {
            for &delta in deltas {
                let rep = check_supersolution(cf, f, sigma, delta, t_lo, t_hi, grid, dt)?;
                let pass = rep.pass;
                tried.push(rep.clone());
                if pass {
                    return Ok((Some(rep), tried));
                }
            }
        }
    }
    Ok((None, tried))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front_factory::conical_front;
    use crate::nonlinearity::make_cubic;
    use crate::wave_profile::solve_profile;

    #[test]
    fn vbar_equals_one_region_excluded_and_limits() {
        let f = make_cubic(0.3).unwrap();
        let p = solve_profile(&f, 1e-8).unwrap();
        let grid = GridSpec::centered_2d(20.0, 20.0, 0.25);
        let cf = conical_front(&f, &p, std::f64::consts::FRAC_PI_3, &grid, 300.0).unwrap();
        // As t → -∞ the two correction terms vanish pointwise.
        let (sigma, delta) = (2.0, 0.1);
        for &(t, tol) in &[(-20.0, 2e-1), (-60.0, 2e-3)] {
            let s = t + sigma * (delta * t as f64).exp();
            let x = (-3.0, -6.0);
            let vbar = (rotated_v_eval(&cf, s, x.0, x.1) + delta * (delta * (x.0 + t)).exp()).min(1.0);
            let vlow = rotated_v_eval(&cf, t, x.0, x.1);
            assert!((vbar - vlow).abs() < tol, "t={t}: v̄-v̲ = {}", vbar - vlow);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = make_cubic(0.3).unwrap();
        let p = solve_profile(&f, 1e-8).unwrap();
        let grid = GridSpec::centered_2d(10.0, 10.0, 0.5);
        let cf = conical_front(&f, &p, std::f64::consts::FRAC_PI_3, &grid, 300.0).unwrap();
        // Grid not ending at x1 = 0.
        assert!(check_supersolution(&cf, &f, 1.0, 0.1, -40.0, -20.0, &grid, 0.1).is_err());
        let half = GridSpec { nx: 41, ny: 41, h: 0.5, origin: [-20.0, -10.0] };
        assert!(check_supersolution(&cf, &f, -1.0, 0.1, -40.0, -20.0, &half, 0.1).is_err());
        assert!(check_supersolution(&cf, &f, 1.0, 0.1, -20.0, -40.0, &half, 0.1).is_err());
    }
}
