//! The planar traveling-wave pair `(c_f, φ_f)`: the profile solves
//! `φ'' + c φ' + f(φ) = 0` with `φ(-∞)=1`, `φ(+∞)=0`, normalized so that
//! `φ(0) = 1/2`. The speed is found by shooting from the unstable manifold
//! of `(1, 0)` and bisecting on the phase-plane outcome; the profile is
//! stored as uniform samples with exact exponential tails outside the
//! sampled window.

use crate::nonlinearity::{make_custom, Nonlinearity};
use crate::numerics::{fit_line, hermite, locate_event, Dopri5};
use crate::{FrontLabError, Result};

/// Sampled traveling-wave profile plus speed and tail rates.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    /// Front speed `c_f`; sign equals the sign of `∫_0^1 f`.
    pub speed: f64,
    /// Right-tail rate: `φ ~ b e^{-λξ}` as `ξ → +∞`.
    pub lambda: f64,
    /// Left-tail rate: `1 - φ ~ a e^{μξ}` as `ξ → -∞`.
    pub mu: f64,
    /// Samples cover `[-window, window]`.
    pub window: f64,
    /// Uniform sample spacing.
    pub dxi: f64,
    /// `φ` at the sample nodes, strictly decreasing.
    pub phi: Vec<f64>,
    /// `φ'` at the sample nodes (all negative).
    pub slope: Vec<f64>,
    tail_a: f64,
    tail_b: f64,
}

impl ProfileSolution {
    /// Evaluate the profile anywhere: monotone cubic interpolation inside
    /// the window, analytic exponential tails outside. Always in `(0,1)`
    /// and decreasing in `ξ`.
    pub fn eval(&self, xi: f64) -> f64 {
        if xi < -self.window {
            return (1.0 - self.tail_a * (self.mu * xi).exp()).max(1.0 - 1e-300);
        }
        if xi > self.window {
            return (self.tail_b * (-self.lambda * xi).exp()).max(1e-300);
        }
        let pos = (xi + self.window) / self.dxi;
        let i = (pos.floor() as usize).min(self.phi.len() - 2);
        let s = pos - i as f64;
        let v = hermite(
            self.phi[i],
            self.dxi * self.slope[i],
            self.phi[i + 1],
            self.dxi * self.slope[i + 1],
            s,
        );
        // Interpolation must stay inside the (decreasing) bracket.
        v.clamp(self.phi[i + 1], self.phi[i])
    }

    /// `φ'` with the same window/tail split as [`eval`](Self::eval).
    pub fn eval_slope(&self, xi: f64) -> f64 {
        if xi < -self.window {
            return -self.tail_a * self.mu * (self.mu * xi).exp();
        }
        if xi > self.window {
            return -self.tail_b * self.lambda * (-self.lambda * xi).exp();
        }
        let pos = (xi + self.window) / self.dxi;
        let i = (pos.floor() as usize).min(self.phi.len() - 2);
        let s = pos - i as f64;
        // Derivative of the cubic Hermite.
        let h = self.dxi;
        let (y0, m0, y1, m1) = (self.phi[i], h * self.slope[i], self.phi[i + 1], h * self.slope[i + 1]);
        let ds = (6.0 * s * s - 6.0 * s) * y0
            + (3.0 * s * s - 4.0 * s + 1.0) * m0
            + (-6.0 * s * s + 6.0 * s) * y1
            + (3.0 * s * s - 2.0 * s) * m1;
        ds / h
    }

    /// Position `ξ` where the profile crosses `level` (profile is strictly
    /// decreasing, so the crossing is unique).
    pub fn invert(&self, level: f64) -> f64 {
        assert!(level > 0.0 && level < 1.0);
        let (mut lo, mut hi) = (-self.window - 200.0, self.window + 200.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Tail rates from the linearizations at the two rest states:
/// `λ = (c + sqrt(c² - 4 f'(0)))/2`, `μ = (-c + sqrt(c² - 4 f'(1)))/2`.
pub fn decay_rates(f: &Nonlinearity, c: f64) -> Result<(f64, f64)> {
    let (fp0, fp1) = (f.deriv(0.0), f.deriv(1.0));
    if fp0 >= 0.0 || fp1 >= 0.0 {
        return Err(FrontLabError::domain(format!(
            "decay rates need stable endpoints: f'(0)={fp0}, f'(1)={fp1}"
        )));
    }
    let lambda = 0.5 * (c + (c * c - 4.0 * fp0).sqrt());
    let mu = 0.5 * (-c + (c * c - 4.0 * fp1).sqrt());
    Ok((lambda, mu))
}

/// The spatially homogeneous flow `ϱ' = f(ϱ)`, `ϱ(0) = ϑ`, evaluated at `t`.
pub fn ode_flow(f: &Nonlinearity, theta0: f64, t: f64) -> f64 {
    assert!(theta0 > 0.0 && theta0 < 1.0, "initial value must lie in (0,1)");
    let mut s = Dopri5::new(|_, y: &[f64; 1]| [f.eval_clamped(y[0])], 0.0, [theta0], 1e-10, 1e-14, t.max(1.0));
    while s.t < t {
        s.step(t);
    }
    s.y[0].clamp(0.0, 1.0)
}

enum Shot {
    TooSmall,
    TooLarge,
}

/// Phase-plane classification of one shot at speed `c`.
///
/// Launch on the unstable manifold of `(1,0)`; the trajectory either crosses
/// `φ = 0` while still descending (speed too small) or turns around /
/// stalls at an interior equilibrium (speed too large).
fn classify(f: &Nonlinearity, c: f64) -> Shot {
    let eps0 = 1e-6;
    let mplus = 0.5 * (-c + (c * c - 4.0 * f.deriv(1.0)).sqrt());
    let y0 = [1.0 - eps0, -eps0 * mplus];
    let rhs = |_: f64, y: &[f64; 2]| [y[1], -c * y[1] - f.eval(y[0].clamp(-0.5, 1.5))];
    let mut s = Dopri5::new(rhs, 0.0, y0, 1e-11, 1e-13, 1.0);
    let xi_max = 4000.0;
    while s.t < xi_max {
        let step = s.step(xi_max);
        if locate_event(&step, |_, y| y[0]).is_some() && step.y1[0] <= 0.0 {
            return Shot::TooSmall;
        }
        // Turn event: q crosses zero from below once clear of the launch.
        if step.y1[1] >= 0.0 && step.y1[0] < 1.0 - 10.0 * eps0 {
            return Shot::TooLarge;
        }
        if step.t1 >= xi_max {
            break;
        }
    }
    Shot::TooLarge
}

/// Compute `(c_f, φ_f)` by shooting/bisection. `f` must be bistable; `tol`
/// is the bisection width on the speed.
pub fn solve_profile(f: &Nonlinearity, tol: f64) -> Result<ProfileSolution> {
    if tol <= 0.0 {
        return Err(FrontLabError::domain("tolerance must be positive"));
    }
    if !f.is_bistable() {
        return Err(FrontLabError::domain(
            "solve_profile needs a bistable reaction term (single interior zero); \
             use subfront_speeds for multistable terms",
        ));
    }
    let c_max = 2.0 * f.max_abs_deriv().sqrt();
    let (mut lo, mut hi) = (-c_max, c_max);
    match classify(f, lo) {
        Shot::TooSmall => {}
        _ => {
            return Err(FrontLabError::numerics(format!(
                "no connection found: bracket failure at c={lo}"
            )))
        }
    }
    match classify(f, hi) {
        Shot::TooLarge => {}
        _ => {
            return Err(FrontLabError::numerics(format!(
                "no connection found: bracket failure at c={hi}"
            )))
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match classify(f, mid) {
            Shot::TooSmall => lo = mid,
            Shot::TooLarge => hi = mid,
        }
    }
    let c = 0.5 * (lo + hi);

    // Sign law: c_f has the sign of ∫_0^1 f.
    if f.integral01.abs() > 16.0 * tol && c.signum() != f.integral01.signum() {
        return Err(FrontLabError::numerics(format!(
            "speed {c} violates the sign of the balance integral {}",
            f.integral01
        )));
    }

    sample_profile(f, c, tol)
}

/// Final pass at the converged speed: integrate once with dense output,
/// re-center so `φ(0) = 1/2`, resample on a uniform symmetric window and
/// attach analytic tails.
fn sample_profile(f: &Nonlinearity, c: f64, tol: f64) -> Result<ProfileSolution> {
    let (lambda, mu) = decay_rates(f, c)?;
    let eps0 = 1e-6;
    let mplus = 0.5 * (-c + (c * c - 4.0 * f.deriv(1.0)).sqrt());
    let rhs = |_: f64, y: &[f64; 2]| [y[1], -c * y[1] - f.eval(y[0].clamp(-0.5, 1.5))];
    let mut s = Dopri5::new(rhs, 0.0, [1.0 - eps0, -eps0 * mplus], 1e-12, 1e-14, 0.05);

    // The trajectory is trusted down to this level; below it the growing
    // unstable mode of the (0,0) saddle contaminates the shot.
    let tail_cut = (tol.sqrt() * 0.1).clamp(1e-7, 1e-4);
    let mut steps = Vec::new();
    let mut xi_half = None;
    loop {
        let step = s.step(1e6);
        if xi_half.is_none() {
            if let Some((t, _)) = locate_event(&step, |_, y| y[0] - 0.5) {
                xi_half = Some(t);
            }
        }
        let stop = step.y1[0] <= tail_cut || step.y1[1] >= 0.0;
        steps.push(step);
        if stop {
            break;
        }
        if s.t > 10_000.0 {
            return Err(FrontLabError::numerics("profile integration did not terminate"));
        }
    }
    let xi_half =
        xi_half.ok_or_else(|| FrontLabError::numerics("profile never crossed 1/2"))?;

    // Window sized so both analytic tails reach 1e-9.
    let reach = (1e9_f64).ln();
    let dxi = 0.02;
    let x_req = (reach / lambda).max(reach / mu) * (1.0 / 0.9);
    let n_half = (x_req / dxi).ceil() as usize;
    let window = n_half as f64 * dxi;
    let n = 2 * n_half + 1;

    let xi_lo = steps.first().unwrap().t0 - xi_half;
    let xi_hi = steps.last().unwrap().t1 - xi_half;
    let phi_lo = steps.first().unwrap().y0[0];
    let phi_hi = steps.last().unwrap().y1[0];
    // Tail amplitudes matched where the trajectory ends.
    let a_launch = (1.0 - phi_lo) * (-mu * xi_lo).exp();
    let b_cut = phi_hi * (lambda * xi_hi).exp();

    let mut phi = vec![0.0; n];
    let mut slope = vec![0.0; n];
    let mut k = 0usize; // current step index; xi grid is increasing
    for i in 0..n {
        let xi = -window + i as f64 * dxi;
        if xi < xi_lo {
            let e = a_launch * (mu * xi).exp();
            phi[i] = 1.0 - e;
            slope[i] = -mu * e;
        } else if xi > xi_hi {
            let e = b_cut * (-lambda * xi).exp();
            phi[i] = e;
            slope[i] = -lambda * e;
        } else {
            let t = xi + xi_half;
            while k + 1 < steps.len() && steps[k].t1 < t {
                k += 1;
            }
            let y = steps[k].eval(t);
            phi[i] = y[0];
            slope[i] = y[1];
        }
    }

    let sol = ProfileSolution {
        speed: c,
        lambda,
        mu,
        window,
        dxi,
        tail_a: (1.0 - phi[0]) * (-mu * -window).exp(),
        tail_b: phi[n - 1] * (lambda * window).exp(),
        phi,
        slope,
    };
    Ok(sol)
}

/// One rung of the multistable speed ladder: the planar connection between
/// the consecutive stable zeros `lower` and `upper`.
#[derive(Debug, Clone)]
pub struct SubFront {
    pub lower: f64,
    pub upper: f64,
    pub speed: f64,
}

#[derive(Debug, Clone)]
pub struct SubfrontLadder {
    /// Ordered bottom-to-top by the connected interval.
    pub fronts: Vec<SubFront>,
    /// Fife-McLeod criterion: a single 0-to-1 front can exist only when the
    /// sub-front speeds strictly increase from the bottom interval to the
    /// top one; any violation is the terrace obstruction.
    pub single_front_possible: bool,
}

/// Solve the profile problem on each maximal bistable sub-interval between
/// consecutive stable zeros of a multistable `f` (each piece rescaled onto
/// `[0,1]`; the rescaling preserves speeds).
pub fn subfront_speeds(f: &Nonlinearity) -> Result<SubfrontLadder> {
    if f.deriv(0.0) >= 0.0 || f.deriv(1.0) >= 0.0 {
        return Err(FrontLabError::domain("subfront_speeds needs stable endpoints"));
    }
    let stable: Vec<f64> = f
        .zeros
        .iter()
        .copied()
        .filter(|&z| f.deriv(z) < 0.0)
        .collect();
    if stable.len() < 2 {
        return Err(FrontLabError::domain("fewer than two stable zeros"));
    }
    let mut fronts = Vec::new();
    for w in stable.windows(2) {
        let (a, b) = (w[0], w[1]);
        let span = b - a;
        let fa = f.clone();
        let fb = f.clone();
        let piece = make_custom(
            format!("piece[{a:.4},{b:.4}]"),
            move |v| fa.eval(a + span * v) / span,
            move |v| fb.deriv(a + span * v),
        );
        let sol = solve_profile(&piece, 1e-9).map_err(|e| {
            FrontLabError::numerics(format!("sub-front on [{a:.4},{b:.4}]: {e}"))
        })?;
        fronts.push(SubFront { lower: a, upper: b, speed: sol.speed });
    }
    let single_front_possible = fronts.windows(2).all(|w| w[0].speed < w[1].speed);
    Ok(SubfrontLadder { fronts, single_front_possible })
}

/// Minimum over shifts of `sup_ξ |profile(ξ - shift) - other(ξ)|` evaluated
/// on a sample grid; used for shape-convergence measurements.
pub fn min_shift_sup_distance(
    values: &[(f64, f64)],
    profile: &ProfileSolution,
    shift_lo: f64,
    shift_hi: f64,
) -> (f64, f64) {
    let sup_at = |shift: f64| -> f64 {
        values
            .iter()
            .map(|&(x, v)| (v - profile.eval(x - shift)).abs())
            .fold(0.0, f64::max)
    };
    // Coarse scan then golden-section refinement around the best candidate.
    let n_scan = 200;
    let mut best = (shift_lo, sup_at(shift_lo));
    for i in 1..=n_scan {
        let sh = shift_lo + (shift_hi - shift_lo) * i as f64 / n_scan as f64;
        let v = sup_at(sh);
        if v < best.1 {
            best = (sh, v);
        }
    }
    let half = (shift_hi - shift_lo) / n_scan as f64;
    let (sh, v) = crate::numerics::minimize_scalar(sup_at, best.0 - half, best.0 + half, 1e-6);
    if v < best.1 {
        (sh, v)
    } else {
        best
    }
}

/// Least-squares speed of a scalar position series.
pub fn fit_speed(times: &[f64], positions: &[f64]) -> f64 {
    fit_line(times, positions).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{make_cubic, make_quintic};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    /// Closed-form cubic wave: φ(ξ) = 1/(1+e^{ξ/√2}), c = (1-2θ)/√2.
    fn exact_cubic_wave(xi: f64) -> f64 {
        1.0 / (1.0 + (xi / SQRT2).exp())
    }

    #[test]
    fn exact_cubic_wave_satisfies_ode() {
        // Verify the oracle itself: substitute into φ'' + cφ' + f(φ).
        let theta = 0.3;
        let c = (1.0 - 2.0 * theta) / SQRT2;
        let f = make_cubic(theta).unwrap();
        for i in -40..=40 {
            let xi = i as f64 * 0.25;
            let p = exact_cubic_wave(xi);
            let dp = -p * (1.0 - p) / SQRT2;
            let ddp = -(1.0 - 2.0 * p) * dp / SQRT2;
            let res = ddp + c * dp + f.eval(p);
            assert!(res.abs() < 1e-14, "xi={xi}: residual {res}");
        }
    }

    #[test]
    fn shooting_matches_closed_form_speed() {
        for theta in [0.2, 0.3, 0.4] {
            let f = make_cubic(theta).unwrap();
            let sol = solve_profile(&f, 1e-8).unwrap();
            let exact = (1.0 - 2.0 * theta) / SQRT2;
            assert!(
                (sol.speed - exact).abs() < 1e-7,
                "θ={theta}: c={} vs {exact}",
                sol.speed
            );
        }
    }

    #[test]
    fn balanced_speed_is_zero() {
        let f = make_cubic(0.5).unwrap();
        let sol = solve_profile(&f, 1e-8).unwrap();
        assert!(sol.speed.abs() < 1e-8, "c={}", sol.speed);
    }

    #[test]
    fn speed_antisymmetric_in_theta() {
        let tol = 1e-9;
        for theta in [0.3, 0.42] {
            let cp = solve_profile(&make_cubic(theta).unwrap(), tol).unwrap().speed;
            let cm = solve_profile(&make_cubic(1.0 - theta).unwrap(), tol).unwrap().speed;
            assert!((cp + cm).abs() < 2.0 * tol + 1e-10, "θ={theta}: {cp} vs {cm}");
        }
    }

    #[test]
    fn speed_decreasing_in_theta() {
        let mut last = f64::INFINITY;
        for i in 1..=9 {
            let theta = i as f64 / 10.0;
            let c = solve_profile(&make_cubic(theta).unwrap(), 1e-8).unwrap().speed;
            assert!(c < last, "θ={theta}: speed ladder not decreasing");
            last = c;
        }
    }

    #[test]
    fn profile_matches_closed_form_shape() {
        let f = make_cubic(0.3).unwrap();
        let sol = solve_profile(&f, 1e-10).unwrap();
        let mut sup = 0.0_f64;
        for i in -300..=300 {
            let xi = i as f64 * 0.1;
            sup = sup.max((sol.eval(xi) - exact_cubic_wave(xi)).abs());
        }
        assert!(sup < 1e-5, "sup error {sup}");
        // Spot value from the closed form: φ(√2 ln 3) = 1/4.
        let xi = SQRT2 * 3.0_f64.ln();
        assert!((sol.eval(xi) - 0.25).abs() < 2e-4);
    }

    #[test]
    fn profile_normalized_and_monotone() {
        let f = make_cubic(0.3).unwrap();
        let sol = solve_profile(&f, 1e-8).unwrap();
        assert!((sol.eval(0.0) - 0.5).abs() < 1e-8);
        for w in sol.phi.windows(2) {
            assert!(w[1] < w[0], "samples must decrease strictly");
        }
        let x = sol.window;
        assert!((1.0 - sol.eval(-x)) < (-(sol.mu) * x * 0.9).exp());
        assert!(sol.eval(x) < (-(sol.lambda) * x * 0.9).exp());
        // Far tail stays positive.
        let far = sol.eval(10.0 * x);
        assert!(far > 0.0 && far < 1e-8);
    }

    #[test]
    fn profile_discrete_ode_residual() {
        let f = make_cubic(0.3).unwrap();
        let sol = solve_profile(&f, 1e-10).unwrap();
        let h = sol.dxi;
        let mut worst = 0.0_f64;
        for i in 1..sol.phi.len() - 1 {
            let ddp = (sol.phi[i - 1] - 2.0 * sol.phi[i] + sol.phi[i + 1]) / (h * h);
            let dp = (sol.phi[i + 1] - sol.phi[i - 1]) / (2.0 * h);
            let res = ddp + sol.speed * dp + f.eval(sol.phi[i]);
            worst = worst.max(res.abs());
        }
        assert!(worst <= 1e-6, "worst interior residual {worst}");
    }

    #[test]
    fn decay_rate_formulas() {
        let f = make_cubic(0.3).unwrap();
        let c = 0.2828427;
        let (lambda, mu) = decay_rates(&f, c).unwrap();
        assert!((lambda - 0.7071068).abs() < 1e-6);
        assert!((mu - 0.7071068).abs() < 1e-6);
        // c = 0 degenerates to sqrt of the endpoint slopes.
        let (l0, m0) = decay_rates(&f, 0.0).unwrap();
        assert!((l0 - 0.3_f64.sqrt()).abs() < 1e-14);
        assert!((m0 - 0.7_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ode_flow_equilibrium_and_limits() {
        let f = make_cubic(0.3).unwrap();
        for t in [0.0, 1.0, 10.0, 50.0] {
            assert_eq!(ode_flow(&f, 0.3, t), 0.3);
        }
        assert!((ode_flow(&f, 0.9, 50.0) - 1.0).abs() < 1e-6);
        assert!(ode_flow(&f, 0.1, 50.0) < 1e-6);
    }

    #[test]
    fn rejects_multistable_and_reports_ladder() {
        let f = make_quintic(0.2, 0.8, 8.0).unwrap();
        assert!(solve_profile(&f, 1e-8).is_err());
        let ladder = subfront_speeds(&f).unwrap();
        assert_eq!(ladder.fronts.len(), 2);
        // Regression goldens from an independent scipy shooting run.
        assert!((ladder.fronts[0].speed - 0.03265986).abs() < 2e-6, "{:?}", ladder);
        assert!((ladder.fronts[1].speed + 0.03265986).abs() < 2e-6);
        assert!(!ladder.single_front_possible);
    }

    #[test]
    fn symmetric_quintic_speeds_are_opposite() {
        let f = make_quintic(0.25, 0.75, 6.0).unwrap();
        let ladder = subfront_speeds(&f).unwrap();
        assert!((ladder.fronts[0].speed + ladder.fronts[1].speed).abs() < 1e-6);
        // 0.25/0.75 ordering admits a single front (low speed < high speed).
        assert!(ladder.single_front_possible);
    }

    #[test]
    fn terrace_quintic_golden() {
        let f = make_quintic(0.1, 0.9, 8.0).unwrap();
        let ladder = subfront_speeds(&f).unwrap();
        assert!((ladder.fronts[0].speed - 0.37558843).abs() < 2e-6);
        assert!((ladder.fronts[1].speed + 0.37558843).abs() < 2e-6);
        assert!(!ladder.single_front_possible);
    }

    #[test]
    fn bistable_ladder_is_single_front() {
        let f = make_cubic(0.3).unwrap();
        let ladder = subfront_speeds(&f).unwrap();
        assert_eq!(ladder.fronts.len(), 1);
        assert!((ladder.fronts[0].speed - 0.2828427).abs() < 1e-5);
        assert!(ladder.single_front_possible);
    }
}
