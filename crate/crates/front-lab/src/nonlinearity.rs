//! Reaction terms `f : [0,1] -> R` with stable endpoints: `f(0)=f(1)=0`,
//! `f'(0)<0`, `f'(1)<0`. The cubic family `s(1-s)(s-θ)` is the canonical
//! bistable example; the quintic family is a two-stage multistable term with
//! stable states 0, 1/2, 1.

use crate::{FrontLabError, Result};
use std::fmt;
use std::sync::Arc;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which family a reaction term belongs to.
#[derive(Clone)]
pub enum ReactionKind {
    Cubic { theta: f64 },
    Quintic { theta1: f64, theta2: f64, k: f64 },
    Custom { name: String, eval: ScalarFn, deriv: ScalarFn },
}

impl fmt::Debug for ReactionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReactionKind::Cubic { theta } => write!(f, "cubic({theta})"),
            ReactionKind::Quintic { theta1, theta2, k } => {
                write!(f, "quintic({theta1}, {theta2}, {k})")
            }
            ReactionKind::Custom { name, .. } => write!(f, "custom({name})"),
        }
    }
}

/// A reaction term together with its precomputed structure.
///
/// Immutable after construction; shareable across threads.
#[derive(Clone, Debug)]
pub struct Nonlinearity {
    pub kind: ReactionKind,
    /// All roots of `f` in `[0,1]`, sorted, including 0 and 1.
    pub zeros: Vec<f64>,
    /// Smallest interior zero.
    pub theta_minus: f64,
    /// Largest interior zero.
    pub theta_plus: f64,
    /// `∫_0^1 f(s) ds`; its sign is the sign of the planar front speed.
    pub integral01: f64,
    pub fprime0: f64,
    pub fprime1: f64,
}

impl Nonlinearity {
    /// Evaluate `f(s)`.
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match &self.kind {
            ReactionKind::Cubic { theta } => s * (1.0 - s) * (s - theta),
            ReactionKind::Quintic { theta1, theta2, k } => {
                -k * s * (s - theta1) * (s - 0.5) * (s - theta2) * (s - 1.0)
            }
            ReactionKind::Custom { eval, .. } => eval(s),
        }
    }

    /// Evaluate `f'(s)`.
    #[inline]
    pub fn deriv(&self, s: f64) -> f64 {
        match &self.kind {
            ReactionKind::Cubic { theta } => {
                -3.0 * s * s + 2.0 * (1.0 + theta) * s - theta
            }
            ReactionKind::Quintic { theta1, theta2, k } => {
                // Product rule over the five factors.
                let fac = [s, s - theta1, s - 0.5, s - theta2, s - 1.0];
                let mut sum = 0.0;
                for skip in 0..5 {
                    let mut p = 1.0;
                    for (j, fj) in fac.iter().enumerate() {
                        if j != skip {
                            p *= fj;
                        }
                    }
                    sum += p;
                }
                -k * sum
            }
            ReactionKind::Custom { deriv, .. } => deriv(s),
        }
    }

    /// `f(clamp(s, 0, 1))` — the form the grid engine uses, since simulated
    /// values may overshoot `[0,1]` by discretization error.
    #[inline]
    pub fn eval_clamped(&self, s: f64) -> f64 {
        self.eval(s.clamp(0.0, 1.0))
    }

    /// `max_{[0,1]} |f'|`, by scan on 2001 points refined once.
    pub fn max_abs_deriv(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..=2000 {
            let s = i as f64 / 2000.0;
            m = m.max(self.deriv(s).abs());
        }
        m
    }

    /// True when the term is bistable: exactly one interior zero, `f<0`
    /// below it and `f>0` above it.
    pub fn is_bistable(&self) -> bool {
        if self.zeros.len() != 3 {
            return false;
        }
        let th = self.zeros[1];
        self.eval(0.5 * th) < 0.0 && self.eval(0.5 * (th + 1.0)) > 0.0
    }
}

/// `f(s) = s(1-s)(s-θ)` with `0 < θ < 1`.
pub fn make_cubic(theta: f64) -> Result<Nonlinearity> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(FrontLabError::domain(format!(
            "cubic threshold must lie in (0,1), got {theta}"
        )));
    }
    Ok(Nonlinearity {
        kind: ReactionKind::Cubic { theta },
        zeros: vec![0.0, theta, 1.0],
        theta_minus: theta,
        theta_plus: theta,
        integral01: (1.0 - 2.0 * theta) / 12.0,
        fprime0: -theta,
        fprime1: -(1.0 - theta),
    })
}

/// `f(s) = -k·s(s-θ1)(s-1/2)(s-θ2)(s-1)` with `0 < θ1 < 1/2 < θ2 < 1`,
/// `k > 0`. Stable states 0, 1/2, 1; sign pattern -,+,-,+ between the zeros.
pub fn make_quintic(theta1: f64, theta2: f64, k: f64) -> Result<Nonlinearity> {
    if !(0.0 < theta1 && theta1 < 0.5 && 0.5 < theta2 && theta2 < 1.0) {
        return Err(FrontLabError::domain(format!(
            "quintic thresholds must satisfy 0 < θ1 < 1/2 < θ2 < 1, got θ1={theta1}, θ2={theta2}"
        )));
    }
    if !(k > 0.0) {
        return Err(FrontLabError::domain(format!("quintic gain must be positive, got {k}")));
    }
    let f = Nonlinearity {
        kind: ReactionKind::Quintic { theta1, theta2, k },
        zeros: vec![0.0, theta1, 0.5, theta2, 1.0],
        theta_minus: theta1,
        theta_plus: theta2,
        integral01: quadrature(|s| -k * s * (s - theta1) * (s - 0.5) * (s - theta2) * (s - 1.0)),
        fprime0: -k * theta1 * 0.5 * theta2,
        fprime1: -k * (1.0 - theta1) * 0.5 * (1.0 - theta2),
    };
    Ok(f)
}

/// Wrap arbitrary `f`, `f'` closures; structure fields are computed
/// numerically (zero scan + quadrature).
pub fn make_custom(
    name: impl Into<String>,
    eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Nonlinearity {
    let eval: ScalarFn = Arc::new(eval);
    let deriv: ScalarFn = Arc::new(deriv);
    let zeros = locate_zeros(eval.as_ref());
    let interior: Vec<f64> = zeros.iter().copied().filter(|&z| z > 0.0 && z < 1.0).collect();
    let theta_minus = interior.first().copied().unwrap_or(f64::NAN);
    let theta_plus = interior.last().copied().unwrap_or(f64::NAN);
    Nonlinearity {
        integral01: quadrature(eval.as_ref()),
        fprime0: deriv(0.0),
        fprime1: deriv(1.0),
        kind: ReactionKind::Custom { name: name.into(), eval, deriv },
        zeros,
        theta_minus,
        theta_plus,
    }
}

/// Structural report produced by [`analyze`]: everything is recomputed from
/// `eval`/`deriv`, independently of the stored fields.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub zeros: Vec<f64>,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub integral01: f64,
    pub fprime0: f64,
    pub fprime1: f64,
    /// `f(0)=f(1)=0` with both endpoints linearly stable.
    pub is_hypothesis_f: bool,
    /// Exactly one interior zero with the -,+ sign pattern.
    pub is_bistable: bool,
}

/// Recompute the structure of `f` from evaluations only: zeros by sign-change
/// bisection on 10^4 uniform cells refined to 1e-12, integral by Simpson,
/// stability flags from the endpoint derivatives.
pub fn analyze(f: &Nonlinearity) -> Analysis {
    let zeros = locate_zeros(|s| f.eval(s));
    let interior: Vec<f64> = zeros.iter().copied().filter(|&z| z > 1e-9 && z < 1.0 - 1e-9).collect();
    let fprime0 = f.deriv(0.0);
    let fprime1 = f.deriv(1.0);
    let endpoint_zeros = f.eval(0.0) == 0.0 && f.eval(1.0) == 0.0;
    let is_hypothesis_f = endpoint_zeros && fprime0 < 0.0 && fprime1 < 0.0;
    let is_bistable = is_hypothesis_f
        && interior.len() == 1
        && f.eval(0.5 * interior[0]) < 0.0
        && f.eval(0.5 * (interior[0] + 1.0)) > 0.0;
    Analysis {
        theta_minus: interior.first().copied().unwrap_or(f64::NAN),
        theta_plus: interior.last().copied().unwrap_or(f64::NAN),
        integral01: quadrature(|s| f.eval(s)),
        zeros,
        fprime0,
        fprime1,
        is_hypothesis_f,
        is_bistable,
    }
}

/// Parse the experiment-file syntax: `cubic(0.3)` or `quintic(0.2, 0.8, 8.0)`.
pub fn parse_spec(text: &str) -> Result<Nonlinearity> {
    let s = text.trim();
    let bad = || FrontLabError::config(format!("cannot parse reaction term `{s}`; expected cubic(θ) or quintic(θ1, θ2, k)"));
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args_str = rest.strip_suffix(')').ok_or_else(bad)?;
    let args: Vec<f64> = args_str
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match (name.trim(), args.as_slice()) {
        ("cubic", [theta]) => make_cubic(*theta),
        ("quintic", [t1, t2, k]) => make_quintic(*t1, *t2, *k),
        _ => Err(bad()),
    }
}

/// Zeros of `g` in `[0,1]`: sign-change scan on 10^4 cells, bisection to
/// 1e-12; exact endpoint roots are kept.
fn locate_zeros(g: impl Fn(f64) -> f64) -> Vec<f64> {
    const CELLS: usize = 10_000;
    let mut zeros = Vec::new();
    let mut push = |z: f64| {
        if zeros.last().map_or(true, |&last: &f64| (z - last) > 1e-9) {
            zeros.push(z);
        }
    };
    if g(0.0) == 0.0 {
        push(0.0);
    }
    let mut a = 0.0;
    let mut ga = g(0.0);
    for i in 1..=CELLS {
        let b = i as f64 / CELLS as f64;
        let gb = g(b);
        if gb == 0.0 {
            push(b);
        } else if ga != 0.0 && ga * gb < 0.0 {
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            push(0.5 * (lo + hi));
        }
        a = b;
        ga = gb;
    }
    zeros
}

/// Composite Simpson on 10^4 cells over [0,1].
fn quadrature(g: impl Fn(f64) -> f64) -> f64 {
    const CELLS: usize = 10_000;
    let h = 1.0 / CELLS as f64;
    let mut sum = g(0.0) + g(1.0);
    for i in 1..CELLS {
        let w = if i % 2 == 0 { 2.0 } else { 4.0 };
        sum += w * g(i as f64 * h);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_values_match_formula() {
        let f = make_cubic(0.3).unwrap();
        // 0.5 * 0.5 * 0.2
        assert!((f.eval(0.5) - 0.05).abs() < 1e-15);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert!((f.fprime0 + 0.3).abs() < 1e-15);
        assert!((f.fprime1 + 0.7).abs() < 1e-15);
    }

    #[test]
    fn cubic_integral_symbolic_vs_quadrature() {
        // Oracle: ∫ s(1-s)(s-θ) ds = (1-2θ)/12, cross-checked by quadrature.
        for theta in [0.1, 0.3, 0.5, 0.7] {
            let f = make_cubic(theta).unwrap();
            let symbolic = (1.0 - 2.0 * theta) / 12.0;
            let quad = quadrature(|s| f.eval(s));
            assert!((f.integral01 - symbolic).abs() < 1e-15);
            assert!((quad - symbolic).abs() < 1e-12, "θ={theta}: {quad} vs {symbolic}");
        }
    }

    #[test]
    fn balanced_cubic_integral_zero() {
        let f = make_cubic(0.5).unwrap();
        assert_eq!(f.integral01, 0.0);
    }

    #[test]
    fn cubic_rejects_bad_theta() {
        assert!(make_cubic(0.0).is_err());
        assert!(make_cubic(1.0).is_err());
        assert!(make_cubic(-0.2).is_err());
    }

    #[test]
    fn quintic_point_value() {
        // -8·0.1·(-0.1)·(-0.4)·(-0.7)·(-0.9), cross-checked by expansion.
        let f = make_quintic(0.2, 0.8, 8.0).unwrap();
        assert!((f.eval(0.1) - (-0.02016)).abs() < 1e-15);
        assert_eq!(f.eval(0.5), 0.0);
        assert!((f.theta_minus - 0.2).abs() < 1e-15);
        assert!((f.theta_plus - 0.8).abs() < 1e-15);
        assert!(f.fprime0 < 0.0 && f.fprime1 < 0.0);
    }

    #[test]
    fn quintic_rejects_bad_ordering() {
        assert!(make_quintic(0.6, 0.8, 8.0).is_err());
        assert!(make_quintic(0.2, 0.4, 8.0).is_err());
        assert!(make_quintic(0.2, 0.8, 0.0).is_err());
    }

    #[test]
    fn analyze_cubic_is_bistable() {
        let f = make_cubic(0.3).unwrap();
        let a = analyze(&f);
        assert!(a.is_bistable && a.is_hypothesis_f);
        assert_eq!(a.zeros.len(), 3);
        assert!((a.theta_minus - 0.3).abs() < 1e-10);
    }

    #[test]
    fn analyze_quintic_not_bistable() {
        let f = make_quintic(0.2, 0.8, 8.0).unwrap();
        let a = analyze(&f);
        assert!(a.is_hypothesis_f);
        assert!(!a.is_bistable);
        assert_eq!(a.zeros.len(), 5);
    }

    #[test]
    fn analyze_monostable_fails_hypothesis() {
        // f(s)=s(1-s): f'(0)=1>0.
        let f = make_custom("logistic", |s| s * (1.0 - s), |s| 1.0 - 2.0 * s);
        let a = analyze(&f);
        assert!(!a.is_hypothesis_f);
    }

    #[test]
    fn analyze_recovers_theta() {
        // 50 deterministic pseudo-random thetas.
        let mut x = 0.123456789_f64;
        for _ in 0..50 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let theta = 0.02 + 0.96 * x;
            let f = make_cubic(theta).unwrap();
            let a = analyze(&f);
            assert!(
                (a.theta_minus - theta).abs() < 1e-10,
                "θ={theta}, recovered {}",
                a.theta_minus
            );
        }
    }

    #[test]
    fn cubic_integral_sign_matches_theta() {
        for i in 1..=9 {
            let theta = i as f64 / 10.0;
            let f = make_cubic(theta).unwrap();
            let want = (1.0 - 2.0 * theta).signum();
            if theta == 0.5 {
                assert_eq!(f.integral01, 0.0);
            } else {
                assert_eq!(f.integral01.signum(), want, "θ={theta}");
            }
        }
    }

    #[test]
    fn quintic_sign_pattern_at_midpoints() {
        let mut x = 0.5_f64;
        for _ in 0..50 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let t1 = 0.05 + 0.4 * x;
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let t2 = 0.55 + 0.4 * x;
            let f = make_quintic(t1, t2, 4.0).unwrap();
            let mids = [
                (0.5 * t1, -1.0),
                (0.5 * (t1 + 0.5), 1.0),
                (0.5 * (0.5 + t2), -1.0),
                (0.5 * (t2 + 1.0), 1.0),
            ];
            for (m, sign) in mids {
                assert_eq!(f.eval(m).signum(), sign, "θ1={t1}, θ2={t2}, s={m}");
            }
        }
    }

    #[test]
    fn deriv_matches_finite_difference() {
        let h = 1e-6;
        for f in [make_cubic(0.3).unwrap(), make_quintic(0.2, 0.8, 8.0).unwrap()] {
            for i in 0..=100 {
                let s = i as f64 / 100.0;
                let sl = (s - h).max(0.0);
                let sr = (s + h).min(1.0);
                let fd = (f.eval(sr) - f.eval(sl)) / (sr - sl);
                assert!(
                    (fd - f.deriv(s)).abs() < 1e-6,
                    "{:?} at s={s}: fd={fd}, deriv={}",
                    f.kind,
                    f.deriv(s)
                );
            }
        }
    }

    #[test]
    fn parse_spec_round_trips() {
        let f = parse_spec("cubic(0.3)").unwrap();
        assert!(matches!(f.kind, ReactionKind::Cubic { theta } if (theta - 0.3).abs() < 1e-15));
        let g = parse_spec(" quintic( 0.2 , 0.8, 8.0 ) ").unwrap();
        assert!(matches!(g.kind, ReactionKind::Quintic { .. }));
        assert!(parse_spec("cubic(1.5)").is_err());
        assert!(parse_spec("exp(0.3)").is_err());
        assert!(parse_spec("cubic").is_err());
    }
}
