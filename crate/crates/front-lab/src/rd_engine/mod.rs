//! Explicit finite-difference integration of `u_t = Δu + c ∂₂u + f(u)` on
//! uniform 1D/2D node grids. The scheme is forward Euler with the 3/5-point
//! Laplacian and a centered drift difference; under the CFL bound and the
//! drift cell-Peclet bound the update is monotone, so the discrete
//! comparison principle holds exactly.

pub mod io;

use crate::nonlinearity::Nonlinearity;
use crate::{FrontLabError, Result};
use rayon::prelude::*;

/// A discretized scalar field `u(t, ·)` on a uniform node grid.
///
/// Nodes are at `origin + (i, j) h`; values are stored row-major
/// (`idx = i + j·nx`). 1D fields have `ny = 1` and live on the first axis.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub dim: usize,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub origin: [f64; 2],
    pub t: f64,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new_1d(nx: usize, h: f64, origin: f64) -> Self {
        ScalarField { dim: 1, nx, ny: 1, h, origin: [origin, 0.0], t: 0.0, values: vec![0.0; nx] }
    }

    pub fn new_2d(nx: usize, ny: usize, h: f64, origin: [f64; 2]) -> Self {
        ScalarField { dim: 2, nx, ny, h, origin, t: 0.0, values: vec![0.0; nx * ny] }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i + j * self.nx
    }

    #[inline]
    pub fn x1(&self, i: usize) -> f64 {
        self.origin[0] + i as f64 * self.h
    }

    #[inline]
    pub fn x2(&self, j: usize) -> f64 {
        self.origin[1] + j as f64 * self.h
    }

    /// Fill from a coordinate function.
    pub fn fill(&mut self, g: impl Fn(f64, f64) -> f64 + Sync) {
        let (nx, h) = (self.nx, self.h);
        let origin = self.origin;
        self.values
            .par_chunks_mut(nx)
            .enumerate()
            .for_each(|(j, row)| {
                let y = origin[1] + j as f64 * h;
                for (i, v) in row.iter_mut().enumerate() {
                    *v = g(origin[0] + i as f64 * h, y);
                }
            });
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Extract one boundary row/column as a trace vector.
    pub fn edge_trace(&self, edge: Edge) -> Vec<f64> {
        match edge {
            Edge::Left => (0..self.ny).map(|j| self.values[self.idx(0, j)]).collect(),
            Edge::Right => (0..self.ny).map(|j| self.values[self.idx(self.nx - 1, j)]).collect(),
            Edge::Bottom => self.values[..self.nx].to_vec(),
            Edge::Top => self.values[(self.ny - 1) * self.nx..].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

/// Per-edge boundary handling.
#[derive(Debug, Clone)]
pub enum EdgePolicy {
    /// Homogeneous Neumann: mirror ghost, edge nodes evolve.
    NeumannZero,
    /// Edge nodes held at a constant far-field limit (0 or 1).
    DirichletFarField(f64),
    /// Edge nodes held at a sampled trace (frozen in time).
    DirichletProfile(Vec<f64>),
}

impl EdgePolicy {
    fn is_dirichlet(&self) -> bool {
        !matches!(self, EdgePolicy::NeumannZero)
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryPolicy {
    pub left: EdgePolicy,
    pub right: EdgePolicy,
    pub bottom: EdgePolicy,
    pub top: EdgePolicy,
}

impl BoundaryPolicy {
    pub fn all_neumann() -> Self {
        BoundaryPolicy {
            left: EdgePolicy::NeumannZero,
            right: EdgePolicy::NeumannZero,
            bottom: EdgePolicy::NeumannZero,
            top: EdgePolicy::NeumannZero,
        }
    }

    /// Every edge frozen to the initial condition's boundary values.
    pub fn frozen_from(u0: &ScalarField) -> Self {
        if u0.dim == 1 {
            BoundaryPolicy {
                left: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Left)),
                right: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Right)),
                bottom: EdgePolicy::NeumannZero,
                top: EdgePolicy::NeumannZero,
            }
        } else {
            BoundaryPolicy {
                left: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Left)),
                right: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Right)),
                bottom: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Bottom)),
                top: EdgePolicy::DirichletProfile(u0.edge_trace(Edge::Top)),
            }
        }
    }

    fn validate(&self, u: &ScalarField) -> Result<()> {
        let check = |p: &EdgePolicy, len: usize, name: &str| -> Result<()> {
            if let EdgePolicy::DirichletProfile(tr) = p {
                if tr.len() != len {
                    return Err(FrontLabError::grid(format!(
                        "{name} trace length {} does not match edge length {len}",
                        tr.len()
                    )));
                }
            }
            Ok(())
        };
        check(&self.left, u.ny, "left")?;
        check(&self.right, u.ny, "right")?;
        if u.dim == 2 {
            check(&self.bottom, u.nx, "bottom")?;
            check(&self.top, u.nx, "top")?;
        }
        Ok(())
    }
}

/// Time-stepping options. `drift` is the vertical comoving speed `c` in
/// `u_t = Δu + c ∂₂u + f(u)` (applied along the single axis in 1D);
/// `t_end` is the integration length, counted from the initial field's time.
#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    pub drift: f64,
    /// Interval between stored snapshots; `<= 0` stores only initial+final.
    pub snapshot_every: f64,
    pub clamp: bool,
}

impl EvolveOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        EvolveOptions { dt, t_end, drift: 0.0, snapshot_every: 0.0, clamp: true }
    }
}

/// Largest stable/monotone step: `0.9 h² / (2·dim + h²·max|f'|)`.
pub fn cfl_limit(h: f64, dim: usize, max_fprime: f64) -> f64 {
    0.9 * h * h / (2.0 * dim as f64 + h * h * max_fprime)
}

struct StencilCtx<'a> {
    f: &'a Nonlinearity,
    nx: usize,
    ny: usize,
    dim: usize,
    inv_h2: f64,
    drift_over_2h: f64,
    dt: f64,
    clamp: bool,
    hold_left: bool,
    hold_right: bool,
    hold_bottom: bool,
    hold_top: bool,
}

/// One forward-Euler step; returns false if a non-finite value appeared.
fn step_field(u: &[f64], out: &mut [f64], ctx: &StencilCtx<'_>) -> bool {
    let nx = ctx.nx;
    if ctx.dim == 1 {
        step_row_1d(u, out, ctx)
    } else {
        out.par_chunks_mut(nx)
            .enumerate()
            .map(|(j, row)| step_row_2d(u, row, j, ctx))
            .reduce(|| true, |a, b| a && b)
    }
}

fn step_row_1d(u: &[f64], out: &mut [f64], ctx: &StencilCtx<'_>) -> bool {
    let n = ctx.nx;
    let mut ok = true;
    for i in 0..n {
        if (i == 0 && ctx.hold_left) || (i == n - 1 && ctx.hold_right) {
            out[i] = u[i];
            continue;
        }
        let uw = if i == 0 { u[1] } else { u[i - 1] };
        let ue = if i == n - 1 { u[n - 2] } else { u[i + 1] };
        let lap = (uw + ue - 2.0 * u[i]) * ctx.inv_h2;
        let drift = (ue - uw) * ctx.drift_over_2h;
        let v = u[i] + ctx.dt * (lap + drift + ctx.f.eval_clamped(u[i]));
        ok &= v.is_finite();
        out[i] = if ctx.clamp { v.clamp(0.0, 1.0) } else { v };
    }
    ok
}

fn step_row_2d(u: &[f64], row_out: &mut [f64], j: usize, ctx: &StencilCtx<'_>) -> bool {
    let (nx, ny) = (ctx.nx, ctx.ny);
    let base = j * nx;
    if (j == 0 && ctx.hold_bottom) || (j == ny - 1 && ctx.hold_top) {
        row_out.copy_from_slice(&u[base..base + nx]);
        return true;
    }
    let row = &u[base..base + nx];
    // Mirror ghosts on Neumann horizontal edges.
    let south = if j == 0 { &u[nx..2 * nx] } else { &u[base - nx..base] };
    let north = if j == ny - 1 { &u[base - nx..base] } else { &u[base + nx..base + 2 * nx] };
    let mut ok = true;
    let i0 = usize::from(ctx.hold_left);
    let i1 = nx - usize::from(ctx.hold_right);
    if ctx.hold_left {
        row_out[0] = row[0];
    }
    if ctx.hold_right {
        row_out[nx - 1] = row[nx - 1];
    }
    for i in i0..i1 {
        let uw = if i == 0 { row[1] } else { row[i - 1] };
        let ue = if i == nx - 1 { row[nx - 2] } else { row[i + 1] };
        let uc = row[i];
        let lap = (uw + ue + south[i] + north[i] - 4.0 * uc) * ctx.inv_h2;
        let drift = (north[i] - south[i]) * ctx.drift_over_2h;
        let v = uc + ctx.dt * (lap + drift + ctx.f.eval_clamped(uc));
        ok &= v.is_finite();
        row_out[i] = if ctx.clamp { v.clamp(0.0, 1.0) } else { v };
    }
    ok
}

/// Integrate the reaction-diffusion(-drift) equation, returning snapshots.
///
/// The first snapshot is the initial state and the last is the state at
/// `t_end`; between them one snapshot is stored every `snapshot_every` time
/// units. Results are bit-identical regardless of worker count.
pub fn evolve(
    u0: &ScalarField,
    f: &Nonlinearity,
    bc: &BoundaryPolicy,
    opts: &EvolveOptions,
) -> Result<Vec<ScalarField>> {
    validate_evolve(u0, f, bc, opts)?;
    let mut cur = u0.clone();
    apply_dirichlet(&mut cur, bc);
    let mut next = cur.clone();

    let ctx = StencilCtx {
        f,
        nx: u0.nx,
        ny: u0.ny,
        dim: u0.dim,
        inv_h2: 1.0 / (u0.h * u0.h),
        drift_over_2h: opts.drift / (2.0 * u0.h),
        dt: opts.dt,
        clamp: opts.clamp,
        hold_left: bc.left.is_dirichlet(),
        hold_right: bc.right.is_dirichlet(),
        hold_bottom: u0.dim == 2 && bc.bottom.is_dirichlet(),
        hold_top: u0.dim == 2 && bc.top.is_dirichlet(),
    };

    let t0 = u0.t;
    let n_steps = (opts.t_end / opts.dt).ceil() as u64;
    let mut snapshots = vec![cur.clone()];
    let snap_every = opts.snapshot_every;
    let mut next_snap = if snap_every > 0.0 { t0 + snap_every } else { f64::INFINITY };

    for step in 1..=n_steps {
        let t_target = t0 + (step as f64 * opts.dt).min(opts.t_end);
        let dt_here = t_target - cur.t;
        let ok = if (dt_here - opts.dt).abs() < 1e-14 * opts.dt.max(1.0) {
            step_field(&cur.values, &mut next.values, &ctx)
        } else {
            // Shortened final step.
            let ctx_short = StencilCtx { dt: dt_here, ..ctx };
            step_field(&cur.values, &mut next.values, &ctx_short)
        };
        next.t = t_target;
        if !ok {
            let (i, j, v) = locate_nonfinite(&next);
            return Err(FrontLabError::NonFinite { t: next.t, i, j, value: v });
        }
        std::mem::swap(&mut cur, &mut next);
        if cur.t >= next_snap - 1e-9 && step != n_steps {
            snapshots.push(cur.clone());
            next_snap += snap_every;
        }
    }
    snapshots.push(cur);
    Ok(snapshots)
}

fn locate_nonfinite(u: &ScalarField) -> (usize, usize, f64) {
    for j in 0..u.ny {
        for i in 0..u.nx {
            let v = u.values[u.idx(i, j)];
            if !v.is_finite() {
                return (i, j, v);
            }
        }
    }
    (0, 0, f64::NAN)
}

fn apply_dirichlet(u: &mut ScalarField, bc: &BoundaryPolicy) {
    let (nx, ny) = (u.nx, u.ny);
    let set = |u: &mut ScalarField, edge: Edge, p: &EdgePolicy| {
        let idxs: Vec<usize> = match edge {
            Edge::Left => (0..ny).map(|j| j * nx).collect(),
            Edge::Right => (0..ny).map(|j| nx - 1 + j * nx).collect(),
            Edge::Bottom => (0..nx).collect(),
            Edge::Top => (0..nx).map(|i| i + (ny - 1) * nx).collect(),
        };
        match p {
            EdgePolicy::NeumannZero => {}
            EdgePolicy::DirichletFarField(v) => {
                for k in idxs {
                    u.values[k] = *v;
                }
            }
            EdgePolicy::DirichletProfile(tr) => {
                for (n, k) in idxs.into_iter().enumerate() {
                    u.values[k] = tr[n];
                }
            }
        }
    };
    set(u, Edge::Left, &bc.left.clone());
    set(u, Edge::Right, &bc.right.clone());
    if u.dim == 2 {
        set(u, Edge::Bottom, &bc.bottom.clone());
        set(u, Edge::Top, &bc.top.clone());
    }
}

fn validate_evolve(
    u0: &ScalarField,
    f: &Nonlinearity,
    bc: &BoundaryPolicy,
    opts: &EvolveOptions,
) -> Result<()> {
    bc.validate(u0)?;
    if u0.dim == 2 && (u0.nx < 3 || u0.ny < 3) {
        return Err(FrontLabError::grid("2D grids need at least 3 nodes per axis"));
    }
    if u0.dim == 1 && u0.nx < 3 {
        return Err(FrontLabError::grid("1D grids need at least 3 nodes"));
    }
    let limit = cfl_limit(u0.h, u0.dim, f.max_abs_deriv());
    if opts.dt > limit * (1.0 + 1e-12) {
        return Err(FrontLabError::domain(format!(
            "CFL violation: dt={} exceeds limit {limit:.6e} at h={}",
            opts.dt, u0.h
        )));
    }
    // Centered drift difference stays monotone only below cell Peclet 2.
    if opts.drift.abs() * u0.h > 2.0 {
        return Err(FrontLabError::domain(format!(
            "drift {} too large for centered differencing at h={}",
            opts.drift, u0.h
        )));
    }
    if opts.t_end < 0.0 || opts.dt <= 0.0 {
        return Err(FrontLabError::domain("need dt > 0 and t_end >= 0"));
    }
    let bad = u0
        .values
        .iter()
        .any(|v| !v.is_finite() || *v < -1e-12 || *v > 1.0 + 1e-12);
    if bad {
        return Err(FrontLabError::domain("initial values must lie in [0,1]"));
    }
    Ok(())
}

/// Evolution on `{x₁ ≤ 0}`: the right edge (the line `x₁ = 0`) carries the
/// homogeneous Neumann condition; other edges behave per `bc`.
pub fn evolve_half_plane(
    u0: &ScalarField,
    f: &Nonlinearity,
    bc: &BoundaryPolicy,
    opts: &EvolveOptions,
) -> Result<Vec<ScalarField>> {
    let mut bc = bc.clone();
    bc.right = EdgePolicy::NeumannZero;
    evolve(u0, f, &bc, opts)
}

/// Centered-in-time residual `u_t - Δu - c ∂₂u - f(u)` from three equally
/// spaced snapshots, evaluated at interior nodes of the middle one.
/// Boundary nodes of the output are zero.
pub fn pde_residual(
    prev: &ScalarField,
    mid: &ScalarField,
    next: &ScalarField,
    f: &Nonlinearity,
    drift: f64,
) -> Result<ScalarField> {
    for s in [prev, next] {
        if s.nx != mid.nx || s.ny != mid.ny || (s.h - mid.h).abs() > 1e-14 {
            return Err(FrontLabError::grid("residual snapshots must share one grid"));
        }
    }
    let dt1 = mid.t - prev.t;
    let dt2 = next.t - mid.t;
    if dt1 <= 0.0 || (dt1 - dt2).abs() > 1e-9 * dt1 {
        return Err(FrontLabError::grid("residual snapshots must be equally spaced in time"));
    }
    let mut out = mid.clone();
    out.values.iter_mut().for_each(|v| *v = 0.0);
    let inv_h2 = 1.0 / (mid.h * mid.h);
    let inv_2dt = 1.0 / (dt1 + dt2);
    let nx = mid.nx;
    if mid.dim == 1 {
        for i in 1..nx - 1 {
            let ut = (next.values[i] - prev.values[i]) * inv_2dt;
            let lap = (mid.values[i - 1] + mid.values[i + 1] - 2.0 * mid.values[i]) * inv_h2;
            let dr = drift * (mid.values[i + 1] - mid.values[i - 1]) / (2.0 * mid.h);
            out.values[i] = ut - lap - dr - f.eval_clamped(mid.values[i]);
        }
    } else {
        for j in 1..mid.ny - 1 {
            for i in 1..nx - 1 {
                let k = i + j * nx;
                let ut = (next.values[k] - prev.values[k]) * inv_2dt;
                let lap = (mid.values[k - 1] + mid.values[k + 1] + mid.values[k - nx]
                    + mid.values[k + nx]
                    - 4.0 * mid.values[k])
                    * inv_h2;
                let dr = drift * (mid.values[k + nx] - mid.values[k - nx]) / (2.0 * mid.h);
                out.values[k] = ut - lap - dr - f.eval_clamped(mid.values[k]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::make_cubic;
    use crate::wave_profile::solve_profile;

    fn cubic_opts(u0: &ScalarField, f: &Nonlinearity, t_end: f64) -> EvolveOptions {
        let dt = cfl_limit(u0.h, u0.dim, f.max_abs_deriv());
        EvolveOptions { dt, t_end, drift: 0.0, snapshot_every: 0.0, clamp: true }
    }

    #[test]
    fn constants_are_exact_fixed_points() {
        let f = make_cubic(0.3).unwrap();
        for value in [0.0, 0.3, 1.0] {
            let mut u0 = ScalarField::new_1d(64, 0.1, 0.0);
            u0.values.iter_mut().for_each(|v| *v = value);
            let opts = cubic_opts(&u0, &f, 2.0);
            let snaps = evolve(&u0, &f, &BoundaryPolicy::all_neumann(), &opts).unwrap();
            let last = snaps.last().unwrap();
            assert!(last.values.iter().all(|&v| v == value), "value {value} drifted");
        }
    }

    #[test]
    fn cfl_violation_rejected() {
        let f = make_cubic(0.3).unwrap();
        let u0 = ScalarField::new_1d(32, 0.1, 0.0);
        let mut opts = cubic_opts(&u0, &f, 1.0);
        opts.dt *= 2.0;
        assert!(evolve(&u0, &f, &BoundaryPolicy::all_neumann(), &opts).is_err());
    }

    #[test]
    fn discrete_comparison_principle() {
        let f = make_cubic(0.3).unwrap();
        let n = 81;
        let mut lo = ScalarField::new_1d(n, 0.1, -4.0);
        let mut hi = lo.clone();
        for i in 0..n {
            let x = lo.x1(i);
            let a = 0.5 + 0.4 * (0.7 * x).sin();
            lo.values[i] = (a - 0.08).clamp(0.0, 1.0);
            hi.values[i] = (a + 0.05 * (1.3 * x).cos()).clamp(0.0, 1.0).max(lo.values[i]);
        }
        let opts = cubic_opts(&lo, &f, 3.0);
        let bc = BoundaryPolicy::all_neumann();
        let a = evolve(&lo, &f, &bc, &opts).unwrap();
        let b = evolve(&hi, &f, &bc, &opts).unwrap();
        for (x, y) in a.last().unwrap().values.iter().zip(&b.last().unwrap().values) {
            assert!(x <= &(y + 1e-12), "comparison violated: {x} > {y}");
        }
    }

    #[test]
    fn translation_equivariance_1d() {
        let f = make_cubic(0.3).unwrap();
        let p = solve_profile(&f, 1e-8).unwrap();
        let n = 401;
        let shift_cells = 7usize;
        let mut u = ScalarField::new_1d(n, 0.1, -20.0);
        let mut v = ScalarField::new_1d(n, 0.1, -20.0);
        for i in 0..n {
            u.values[i] = p.eval(u.x1(i));
            v.values[i] = p.eval(v.x1(i) - shift_cells as f64 * 0.1);
        }
        let opts = cubic_opts(&u, &f, 1.0);
        let bc_u = BoundaryPolicy::frozen_from(&u);
        let bc_v = BoundaryPolicy::frozen_from(&v);
        let au = evolve(&u, &f, &bc_u, &opts).unwrap();
        let av = evolve(&v, &f, &bc_v, &opts).unwrap();
        let (fu, fv) = (au.last().unwrap(), av.last().unwrap());
        // Compare away from the ends where the frozen traces differ.
        for i in 60..n - 60 {
            let d = (fu.values[i - shift_cells] - fv.values[i]).abs();
            assert!(d == 0.0, "equivariance broken at {i}: {d}");
        }
    }

    #[test]
    fn half_plane_matches_even_extension() {
        let f = make_cubic(0.3).unwrap();
        // Even field on [-L, L]; half grid is its left half including x1=0.
        let nx_half = 33;
        let nfull = 2 * nx_half - 1;
        let h = 0.2;
        let mut full = ScalarField::new_2d(nfull, 24, h, [-(nx_half as f64 - 1.0) * h, 0.0]);
        full.fill(|x, y| {
            let r = (x * x + 0.7 * y * y).sqrt();
            (1.0 / (1.0 + (r - 2.0).exp())).clamp(0.0, 1.0)
        });
        let mut half = ScalarField::new_2d(nx_half, 24, h, [-(nx_half as f64 - 1.0) * h, 0.0]);
        for j in 0..24 {
            for i in 0..nx_half {
                half.values[half.idx(i, j)] = full.values[full.idx(i, j)];
            }
        }
        let opts = cubic_opts(&full, &f, 0.5);
        let bc = BoundaryPolicy::all_neumann();
        let a = evolve(&full, &f, &bc, &opts).unwrap();
        let b = evolve_half_plane(&half, &f, &bc, &opts).unwrap();
        let (fa, fb) = (a.last().unwrap(), b.last().unwrap());
        for j in 0..24 {
            for i in 0..nx_half {
                let d = (fa.values[fa.idx(i, j)] - fb.values[fb.idx(i, j)]).abs();
                assert!(d <= 1e-10, "half-plane mismatch at ({i},{j}): {d}");
            }
        }
    }

    #[test]
    fn determinism_across_worker_counts() {
        let f = make_cubic(0.3).unwrap();
        let mut u0 = ScalarField::new_2d(65, 65, 0.2, [-6.4, -6.4]);
        u0.fill(|x, y| (0.5 + 0.4 * (0.8 * x).sin() * (0.6 * y).cos()).clamp(0.0, 1.0));
        let opts = cubic_opts(&u0, &f, 0.6);
        let bc = BoundaryPolicy::all_neumann();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| evolve(&u0, &f, &bc, &opts).unwrap())
        };
        let a = run(1);
        let b = run(4);
        for (x, y) in a.last().unwrap().values.iter().zip(&b.last().unwrap().values) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn residual_of_exact_planar_front_scales_quadratically() {
        let f = make_cubic(0.3).unwrap();
        let p = solve_profile(&f, 1e-10).unwrap();
        let c = p.speed;
        let residual_at = |h: f64, dt: f64| -> f64 {
            let n = (20.0 / h) as usize | 1;
            let make = |t: f64| {
                let mut u = ScalarField::new_1d(n, h, -10.0);
                u.t = t;
                for i in 0..n {
                    u.values[i] = p.eval(u.x1(i) - c * t);
                }
                u
            };
            let r = pde_residual(&make(0.0), &make(dt), &make(2.0 * dt), &f, 0.0).unwrap();
            r.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
        };
        let r1 = residual_at(0.05, 1e-4);
        assert!(r1 < 1e-3, "residual {r1}");
        let r2 = residual_at(0.025, 1e-4);
        let ratio = r1 / r2;
        assert!(ratio > 3.0, "halving h should quarter the residual, got ratio {ratio}");
    }

    #[test]
    fn residual_zero_field_and_ode_flow() {
        let f = make_cubic(0.3).unwrap();
        let make = |t: f64, v: f64| {
            let mut u = ScalarField::new_1d(33, 0.1, 0.0);
            u.t = t;
            u.values.iter_mut().for_each(|x| *x = v);
            u
        };
        let r = pde_residual(&make(0.0, 0.0), &make(0.01, 0.0), &make(0.02, 0.0), &f, 0.0).unwrap();
        assert!(r.values.iter().all(|&v| v == 0.0));
        // Spatially constant flow: residual bounded by the dt² scale.
        let dt = 0.01;
        let g = |t: f64| crate::wave_profile::ode_flow(&f, 0.6, t);
        let r = pde_residual(&make(0.0, g(0.0)), &make(dt, g(dt)), &make(2.0 * dt, g(2.0 * dt)), &f, 0.0)
            .unwrap();
        let m = r.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let scale = dt * dt * 0.25 * 0.7;
        assert!(m <= scale.max(1e-9), "constant-flow residual {m} vs scale {scale}");
    }

    #[test]
    fn values_stay_in_unit_interval() {
        let f = make_cubic(0.3).unwrap();
        let mut u0 = ScalarField::new_1d(201, 0.05, -5.0);
        for i in 0..201 {
            u0.values[i] = if u0.x1(i) < 0.0 { 1.0 } else { 0.0 };
        }
        let opts = cubic_opts(&u0, &f, 2.0);
        let snaps = evolve(&u0, &f, &BoundaryPolicy::frozen_from(&u0), &opts).unwrap();
        for s in &snaps {
            for &v in &s.values {
                assert!((-1e-6..=1.0 + 1e-6).contains(&v));
            }
        }
    }
}
