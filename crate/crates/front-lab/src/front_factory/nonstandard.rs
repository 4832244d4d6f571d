//! The non-standard merging front: launched at a large negative time from
//! the rotated V-subsolution restricted to the left half-plane and extended
//! evenly, it behaves like three planar pieces (two oblique arms separated
//! by a widening horizontal segment) for negative times and converges to a
//! single steeper V-front for large positive times. No rigid motion maps
//! the early shape onto the late one.

use super::conical::{conical_front, rotated_v_eval, ConicalFront};
use super::{reference_interfaces, GridSpec};
use crate::interface_geometry::{extract_graph_interface, InterfaceSet};
use crate::nonlinearity::Nonlinearity;
use crate::rd_engine::{cfl_limit, evolve, BoundaryPolicy, Edge, EdgePolicy, EvolveOptions, ScalarField};
use crate::wave_profile::{decay_rates, solve_profile};
use crate::{FrontLabError, Result};

/// Interval between snapshots; the tracking window is recentered on the
/// interface median at the same cadence.
pub const RECENTER_INTERVAL: f64 = 5.0;

/// Snapshots and bookkeeping of one non-standard front run.
#[derive(Debug, Clone)]
pub struct NonstandardRun {
    pub alpha: f64,
    pub n_start: f64,
    pub c_f: f64,
    /// Long-time vertical speed `c̃ = c_f / |cos 2α|`.
    pub c_tilde: f64,
    /// Snapshots every [`RECENTER_INTERVAL`] in lab coordinates (window
    /// origins move with the recentering).
    pub snapshots: Vec<ScalarField>,
    /// Matching piecewise-linear reference interfaces.
    pub refs: Vec<InterfaceSet>,
    /// The relaxed V-front behind the initial subsolution.
    pub conical: ConicalFront,
    /// Width of the lateral wall-contact layer to exclude from
    /// measurements against the (infinite-domain) references.
    pub lateral_margin: f64,
}

impl NonstandardRun {
    /// Lab-frame level-set interfaces per snapshot, columns restricted to
    /// the measurement region away from the lateral walls.
    pub fn interfaces(&self, level: f64) -> Vec<InterfaceSet> {
        self.snapshots
            .iter()
            .map(|u| {
                let g = extract_graph_interface(u, level);
                let x_lo = u.x1(0) + self.lateral_margin;
                let x_hi = u.x1(u.nx - 1) - self.lateral_margin;
                let pts: Vec<[f64; 2]> =
                    g.points.into_iter().filter(|p| p[0] >= x_lo && p[0] <= x_hi).collect();
                let segments = (1..pts.len()).map(|k| [k - 1, k]).collect();
                InterfaceSet { t: u.t, level, points: pts, segments }
            })
            .collect()
    }

    /// Worst negative nodewise jump between consecutive snapshots on the
    /// overlap of their (recentered) windows; 0 for a monotone run.
    pub fn monotone_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for w in self.snapshots.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let off = ((b.origin[1] - a.origin[1]) / a.h).round() as i64;
            for jb in 0..b.ny {
                let ja = jb as i64 + off;
                if ja < 0 || ja >= a.ny as i64 {
                    continue;
                }
                let (ra, rb) = (ja as usize * a.nx, jb * b.nx);
                for i in 0..a.nx {
                    let d = b.values[rb + i] - a.values[ra + i];
                    worst = worst.min(d);
                }
            }
        }
        -worst
    }

    /// Largest evenness defect `|u(x₁) - u(-x₁)|` over all snapshots.
    pub fn evenness_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for u in &self.snapshots {
            for j in 0..u.ny {
                for i in 0..u.nx / 2 {
                    let d = (u.values[u.idx(i, j)] - u.values[u.idx(u.nx - 1 - i, j)]).abs();
                    worst = worst.max(d);
                }
            }
        }
        worst
    }
}

/// Build and run the non-standard front.
///
/// The initial condition at `t = -n` is `v̲(-n, -|x₁|, x₂)` (the even
/// extension realizes the half-plane Neumann problem), completed by its
/// mirror images across the lateral walls so the truncated domain evolves
/// the even-periodic arrangement exactly; together with the subsolution
/// property this makes the run nondecreasing in time at every node. The
/// window is recentered on the interface median every
/// [`RECENTER_INTERVAL`]; rows entering at the top are filled with the
/// vertical far-field decay of the limiting front.
pub fn build_nonstandard(
    f: &Nonlinearity,
    alpha: f64,
    n_start: f64,
    grid: &GridSpec,
    t_end: f64,
) -> Result<NonstandardRun> {
    if !(alpha > std::f64::consts::FRAC_PI_4 && alpha < std::f64::consts::FRAC_PI_2) {
        return Err(FrontLabError::domain(format!(
            "cone half-angle must lie in (π/4, π/2) for the non-standard construction, got {alpha}"
        )));
    }
    if !f.is_bistable() {
        return Err(FrontLabError::domain("non-standard construction needs a bistable term"));
    }
    let p = solve_profile(f, 1e-8)?;
    if p.speed <= 0.0 {
        return Err(FrontLabError::domain(format!(
            "non-standard construction needs c_f > 0, got c_f = {}",
            p.speed
        )));
    }
    let c = p.speed / alpha.sin();
    let kink_offset = n_start * c * alpha.cos();
    if kink_offset < 5.0 {
        return Err(FrontLabError::domain(format!(
            "launch time too small: the left arm kink sits only {kink_offset:.2} units left of \
             the symmetry axis (need ≥ 5)"
        )));
    }
    let half_width = -grid.origin[0];
    if kink_offset > 0.75 * half_width {
        return Err(FrontLabError::domain(
            "window too narrow for the launch-time kink separation",
        ));
    }

    // Relax the V-front on a window large enough that the rotated
    // evaluations at t = -n stay inside it (tails cover the rest).
    let half_height = -grid.origin[1];
    let reach = half_width.max(half_height) + c * n_start.min(80.0) * 0.35 + 8.0;
    let cone_grid = GridSpec::centered_2d(reach, reach, grid.h);
    let cf = conical_front(f, &p, alpha, &cone_grid, 400.0)?;

    // Initial condition: the even extension plus lateral mirror images
    // (max of subsolutions stays a subsolution of the mirrored problem).
    let mut u = grid.field_2d();
    u.t = -n_start;
    let g = |x: f64, y: f64| rotated_v_eval(&cf, -n_start, -x.abs(), y);
    u.fill(|x, y| {
        g(x, y)
            .max(g(-2.0 * half_width - x, y))
            .max(g(2.0 * half_width - x, y))
    });

    let c_tilde = p.speed / (2.0 * alpha).cos().abs();
    // Far-field vertical decay rate of the limiting front; inserted rows
    // with this rate are discrete subsolutions, preserving monotonicity.
    let (lambda_tilde, _) = decay_rates(f, c_tilde)?;
    let row_decay = (-lambda_tilde * grid.h).exp();

    let dt = cfl_limit(grid.h, 2, f.max_abs_deriv());
    let mut bc = lateral_neumann(&u);
    let mut snapshots = vec![u.clone()];
    let total = n_start + t_end;
    loop {
        let elapsed = u.t + n_start;
        if elapsed >= total - 1e-9 {
            break;
        }
        let seg = RECENTER_INTERVAL.min(total - elapsed);
        let opts = EvolveOptions { dt, t_end: seg, drift: 0.0, snapshot_every: 0.0, clamp: true };
        u = evolve(&u, f, &bc, &opts)?.into_iter().last().unwrap();

        // Overflow guard: interface must stay clear of the horizontal edges.
        let gamma = extract_graph_interface(&u, 0.5);
        if gamma.points.is_empty() {
            return Err(FrontLabError::numerics("interface left the window"));
        }
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for pt in &gamma.points {
            y_min = y_min.min(pt[1]);
            y_max = y_max.max(pt[1]);
        }
        let guard = 10.0 * grid.h;
        if y_max > u.x2(u.ny - 1) - guard || y_min < u.x2(0) + guard {
            return Err(FrontLabError::numerics(format!(
                "window overflow at t={:.2}: interface within 10 cells of a horizontal edge",
                u.t
            )));
        }

        // Recenter on the interface median (integer cells, lab coordinates
        // stay exact through the origin shift).
        let mut ys: Vec<f64> = gamma.points.iter().map(|p| p[1]).collect();
        ys.sort_by(f64::total_cmp);
        let median = ys[ys.len() / 2];
        let center = 0.5 * (u.x2(0) + u.x2(u.ny - 1));
        let k = ((median - center) / grid.h).round() as i64;
        if k > 0 {
            scroll_up(&mut u, k as usize, row_decay);
            bc = lateral_neumann(&u);
        }
        snapshots.push(u.clone());
    }

    let refs = snapshots
        .iter()
        .map(|s| reference_interfaces(s.t, alpha, p.speed, half_width))
        .collect();
    Ok(NonstandardRun {
        alpha,
        n_start,
        c_f: p.speed,
        c_tilde,
        snapshots,
        refs,
        conical: cf,
        lateral_margin: (0.15 * half_width).max(4.0),
    })
}

fn lateral_neumann(u: &ScalarField) -> BoundaryPolicy {
    BoundaryPolicy {
        left: EdgePolicy::NeumannZero,
        right: EdgePolicy::NeumannZero,
        bottom: EdgePolicy::DirichletProfile(u.edge_trace(Edge::Bottom)),
        top: EdgePolicy::DirichletProfile(u.edge_trace(Edge::Top)),
    }
}

/// Move the window up by `k` cells: rows shift down, rows entering at the
/// top continue the last row with a per-row decay factor.
fn scroll_up(u: &mut ScalarField, k: usize, row_decay: f64) {
    let (nx, ny) = (u.nx, u.ny);
    let k = k.min(ny - 1);
    for j in 0..ny - k {
        let src = (j + k) * nx;
        let dst = j * nx;
        u.values.copy_within(src..src + nx, dst);
    }
    for j in ny - k..ny {
        let fade = row_decay.powi((j - (ny - 1 - k)) as i32);
        let base = (ny - 1 - k) * nx;
        for i in 0..nx {
            u.values[j * nx + i] = u.values[base + i] * fade;
        }
    }
    u.origin[1] += k as f64 * u.h;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::make_cubic;

    const PI_3: f64 = std::f64::consts::FRAC_PI_3;

    #[test]
    fn rejects_bad_parameters() {
        let f = make_cubic(0.3).unwrap();
        let grid = GridSpec::centered_2d(20.0, 30.0, 0.5);
        // Angle below π/4.
        let err = build_nonstandard(&f, 0.5, 30.0, &grid, 5.0).unwrap_err();
        assert!(err.to_string().contains("π/4"), "message: {err}");
        // Balanced term has c_f = 0.
        let bal = make_cubic(0.5).unwrap();
        assert!(build_nonstandard(&bal, PI_3, 30.0, &grid, 5.0).is_err());
        // Launch time too small: kink on top of the axis.
        assert!(build_nonstandard(&f, PI_3, 2.0, &grid, 5.0).is_err());
    }

    #[test]
    fn short_run_shape_and_monotonicity() {
        let f = make_cubic(0.3).unwrap();
        // Coarse, short run: n = 40, five time units forward.
        let grid = GridSpec::centered_2d(24.0, 34.0, 0.5);
        let run = build_nonstandard(&f, PI_3, 40.0, &grid, 5.0).unwrap();
        assert!(run.snapshots.len() >= 2);
        assert!(run.evenness_defect() < 1e-12, "evenness {}", run.evenness_defect());
        assert!(run.monotone_defect() <= 1e-10, "monotone defect {}", run.monotone_defect());
        // Initial interface close to the reference polyline.
        let gammas = run.interfaces(0.5);
        let d = crate::interface_geometry::dist_tilde(&gammas[0], &run.refs[0]).unwrap();
        assert!(d <= 3.0, "d-tilde to the t=-n reference is {d}");
        // Lower planar bound: u dominates the three planar fronts away
        // from the lateral walls.
        let p = run.conical.planar_profile();
        let s2a = (2.0 * PI_3).sin();
        let c2a = (2.0 * PI_3).cos();
        for snap in &run.snapshots {
            for j in 0..snap.ny {
                for i in 0..snap.nx {
                    let (x, y) = (snap.x1(i), snap.x2(j));
                    if x.abs() > 24.0 - run.lateral_margin {
                        continue;
                    }
                    let bound = p
                        .eval(-x * s2a - y * c2a - run.c_f * snap.t)
                        .max(p.eval(x * s2a - y * c2a - run.c_f * snap.t))
                        .max(p.eval(y - run.c_f * snap.t));
                    assert!(
                        snap.values[snap.idx(i, j)] >= bound - 1e-3,
                        "planar lower bound violated at t={}, ({x},{y})",
                        snap.t
                    );
                }
            }
        }
    }
}
