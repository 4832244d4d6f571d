//! Small shared numerical kernels: an adaptive Dormand-Prince 5(4) stepper,
//! cubic Hermite interpolation, least-squares line fits and a scalar
//! minimizer. Everything here is deterministic.

/// One accepted step of the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct RkStep<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub dy0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
    pub dy1: [f64; N],
}

impl<const N: usize> RkStep<N> {
    /// Cubic Hermite interpolation inside the step.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        if h == 0.0 {
            return self.y1;
        }
        let s = (t - self.t0) / h;
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = hermite(self.y0[k], h * self.dy0[k], self.y1[k], h * self.dy1[k], s);
        }
        out
    }
}

#[inline]
pub fn hermite(y0: f64, m0: f64, y1: f64, m1: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * m1
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

/// Adaptive Dormand-Prince 5(4) integrator for small systems.
pub struct Dopri5<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> {
    rhs: F,
    pub t: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
    h: f64,
    rtol: f64,
    atol: f64,
    max_step: f64,
}

impl<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> Dopri5<N, F> {
    pub fn new(rhs: F, t0: f64, y0: [f64; N], rtol: f64, atol: f64, max_step: f64) -> Self {
        let dy = rhs(t0, &y0);
        Dopri5 {
            rhs,
            t: t0,
            y: y0,
            dy,
            h: 1e-4_f64.min(max_step),
            rtol,
            atol,
            max_step,
        }
    }

    /// Advance by one accepted step, never stepping past `t_stop`.
    pub fn step(&mut self, t_stop: f64) -> RkStep<N> {
        loop {
            let mut h = self.h.min(self.max_step);
            if self.t + h > t_stop {
                h = t_stop - self.t;
            }
            if h <= 0.0 {
                // Already at t_stop; return a degenerate step.
                return RkStep {
                    t0: self.t,
                    y0: self.y,
                    dy0: self.dy,
                    t1: self.t,
                    y1: self.y,
                    dy1: self.dy,
                };
            }
            let mut k = [[0.0; N]; 7];
            k[0] = self.dy;
            for stage in 0..6 {
                let mut ys = self.y;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for n in 0..N {
                            ys[n] += h * a * kj[n];
                        }
                    }
                }
                k[stage + 1] = (self.rhs)(self.t + C[stage] * h, &ys);
            }
            let mut y5 = self.y;
            let mut y4 = self.y;
            for (j, kj) in k.iter().enumerate() {
                for n in 0..N {
                    y5[n] += h * B5[j] * kj[n];
                    y4[n] += h * B4[j] * kj[n];
                }
            }
            // Scaled RMS error.
            let mut err = 0.0;
            for n in 0..N {
                let sc = self.atol + self.rtol * self.y[n].abs().max(y5[n].abs());
                let e = (y5[n] - y4[n]) / sc;
                err += e * e;
            }
            err = (err / N as f64).sqrt();

            if err <= 1.0 || h <= 1e-14 {
                let step = RkStep {
                    t0: self.t,
                    y0: self.y,
                    dy0: self.dy,
                    t1: self.t + h,
                    y1: y5,
                    dy1: k[6], // FSAL: last stage is f(t1, y5)
                };
                self.t += h;
                self.y = y5;
                self.dy = k[6];
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                self.h = (h * fac).min(self.max_step);
                return step;
            }
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
        }
    }
}

/// Locate a zero of `g(t, y(t))` inside an accepted step by bisection on the
/// Hermite interpolant. Returns `(t, y)` at the crossing, or `None` if `g`
/// does not change sign across the step.
pub fn locate_event<const N: usize>(
    step: &RkStep<N>,
    g: impl Fn(f64, &[f64; N]) -> f64,
) -> Option<(f64, [f64; N])> {
    let g0 = g(step.t0, &step.y0);
    let g1 = g(step.t1, &step.y1);
    if g0 == 0.0 {
        return Some((step.t0, step.y0));
    }
    if g0 * g1 > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (step.t0, step.t1);
    let mut glo = g0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let ym = step.eval(mid);
        let gm = g(mid, &ym);
        if gm == 0.0 {
            return Some((mid, ym));
        }
        if glo * gm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
        if hi - lo < 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    Some((t, step.eval(t)))
}

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Golden-section minimization of a unimodal scalar function on `[lo, hi]`.
pub fn minimize_scalar(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dopri5_exponential_decay() {
        let mut s = Dopri5::new(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 1e-12, 1e-14, 10.0);
        while s.t < 5.0 {
            s.step(5.0);
        }
        assert!((s.y[0] - (-5.0_f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn dopri5_harmonic_oscillator_energy() {
        let mut s = Dopri5::new(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            1e-12,
            1e-14,
            0.5,
        );
        while s.t < 20.0 {
            s.step(20.0);
        }
        let e = s.y[0] * s.y[0] + s.y[1] * s.y[1];
        assert!((e - 1.0).abs() < 1e-9);
    }

    #[test]
    fn event_location_cosine_zero() {
        let mut s = Dopri5::new(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            1e-12,
            1e-14,
            0.2,
        );
        // y0 = cos(t); first zero at pi/2.
        loop {
            let step = s.step(10.0);
            if let Some((t, _)) = locate_event(&step, |_, y| y[0]) {
                assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
                return;
            }
            assert!(s.t < 10.0, "missed the event");
        }
    }

    #[test]
    fn line_fit_exact() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (m, b) = fit_line(&xs, &ys);
        assert!((m - 2.0).abs() < 1e-14);
        assert!((b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, _) = minimize_scalar(|x| (x - 0.7) * (x - 0.7), -2.0, 2.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-8);
    }
}
