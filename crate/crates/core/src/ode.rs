//! Explicit Runge–Kutta integrators on fixed-size states.
//!
//! `Dopri` is the Dormand–Prince 5(4) embedded pair with step-size control;
//! `rk4_fixed` is the classical fourth-order method with a constant step.
//! Both integrate in either direction of time.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopriOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for DopriOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-300, h_init: 1e-4, h_min: 1e-14, h_max: 0.1, max_steps: 2_000_000 }
    }
}

const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy<const N: usize>(y: &[f64; N], h: f64, ks: &[&[f64; N]], coeffs: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, c) in ks.iter().zip(coeffs) {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Stateful Dormand–Prince integrator. The step size carries over between
/// calls to [`Dopri::advance_to`], so output grids cost little extra work.
pub struct Dopri<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]> {
    f: F,
    pub t: f64,
    pub y: [f64; N],
    k1: [f64; N],
    h: f64,
    opts: DopriOptions,
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted scaled error estimate since the last reset.
    pub max_error: f64,
}

impl<const N: usize, F: FnMut(f64, &[f64; N]) -> [f64; N]> Dopri<N, F> {
    pub fn new(mut f: F, t0: f64, y0: [f64; N], opts: DopriOptions) -> Self {
        let k1 = f(t0, &y0);
        Self { f, t: t0, y: y0, k1, h: opts.h_init, opts, steps: 0, rejected: 0, max_error: 0.0 }
    }

    pub fn reset_error(&mut self) {
        self.max_error = 0.0;
    }

    /// Takes one accepted step towards `target` without overshooting.
    /// Returns the scaled error of the accepted step.
    pub fn step_towards(&mut self, target: f64) -> Result<f64> {
        let dir = if target >= self.t { 1.0 } else { -1.0 };
        loop {
            if self.steps + self.rejected >= self.opts.max_steps {
                return Err(Error::Stiffness(format!(
                    "step budget of {} exhausted at t = {}",
                    self.opts.max_steps, self.t
                )));
            }
            let remaining = (target - self.t).abs();
            let mut h = self.h.min(self.opts.h_max).min(remaining);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let hs = dir * h;
            let t = self.t;
            let y = &self.y;
            let k1 = self.k1;
            let k2 = (self.f)(t + C[0] * hs, &axpy(y, hs, &[&k1], &A2));
            let k3 = (self.f)(t + C[1] * hs, &axpy(y, hs, &[&k1, &k2], &A3));
            let k4 = (self.f)(t + C[2] * hs, &axpy(y, hs, &[&k1, &k2, &k3], &A4));
            let k5 = (self.f)(t + C[3] * hs, &axpy(y, hs, &[&k1, &k2, &k3, &k4], &A5));
            let k6 = (self.f)(t + C[4] * hs, &axpy(y, hs, &[&k1, &k2, &k3, &k4, &k5], &A6));
            let y_new = axpy(y, hs, &[&k1, &k2, &k3, &k4, &k5, &k6], &B);
            let t_new = if last { target } else { t + hs };
            let k7 = (self.f)(t_new, &y_new);
            let mut err: f64 = 0.0;
            let mut finite = true;
            for i in 0..N {
                let e = hs
                    * (E[0] * k1[i] + E[2] * k3[i] + E[3] * k4[i] + E[4] * k5[i] + E[5] * k6[i]
                        + E[6] * k7[i]);
                let scale = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / scale).abs());
                finite &= y_new[i].is_finite();
            }
            if !finite || err.is_nan() {
                err = f64::INFINITY;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                self.t = t_new;
                self.y = y_new;
                self.k1 = k7;
                self.steps += 1;
                self.max_error = self.max_error.max(err);
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
                return Ok(err * self.opts.rtol);
            }
            self.rejected += 1;
            self.h = h * factor.min(1.0);
            if self.h < self.opts.h_min {
                return Err(Error::Stiffness(format!(
                    "step size {:e} below minimum {:e} at t = {}",
                    self.h, self.opts.h_min, self.t
                )));
            }
        }
    }

    /// Integrates until `t == target`.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t != target {
            self.step_towards(target)?;
        }
        Ok(())
    }
}

/// Classical RK4 with `steps` constant steps of size `h` (sign gives the
/// direction); `observe` sees every `stride`-th state, starting with the first.
pub fn rk4_fixed<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    h: f64,
    steps: usize,
    stride: usize,
    mut observe: O,
) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let mut y = y0;
    let stride = stride.max(1);
    observe(t0, &y);
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, h, &[&k1], &[0.5]));
        let k3 = f(t + 0.5 * h, &axpy(&y, h, &[&k2], &[0.5]));
        let k4 = f(t + h, &axpy(&y, h, &[&k3], &[1.0]));
        y = axpy(&y, h, &[&k1, &k2, &k3, &k4], &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]);
        if (s + 1) % stride == 0 {
            observe(t0 + (s + 1) as f64 * h, &y);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dopri_harmonic_oscillator() {
        let opts = DopriOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let mut s = Dopri::new(|_t, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], opts);
        s.advance_to(10.0).unwrap();
        assert!((s.y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((s.y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn dopri_backward() {
        let opts = DopriOptions { rtol: 1e-12, atol: 1e-300, ..Default::default() };
        let mut s = Dopri::new(|_t, y: &[f64; 1]| [-2.0 * y[0]], 3.0, [1.0], opts);
        s.advance_to(0.0).unwrap();
        assert!((s.y[0] / 6f64.exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rk4_converges_fourth_order() {
        let exact = 1f64.exp();
        let run = |n: usize| rk4_fixed(|_t, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1.0 / n as f64, n, n, |_, _| {})[0];
        let e1 = (run(10) - exact).abs();
        let e2 = (run(20) - exact).abs();
        assert!((e1 / e2 - 16.0).abs() < 1.0);
    }
}
