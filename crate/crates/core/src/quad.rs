//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and half-infinite intervals.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("finite endpoints required".into()));
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };
    let mut heap = BinaryHeap::new();
    let (v, e) = kronrod(&f, lo, hi);
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    heap.push(Piece { a: lo, b: hi, value: v, error: e });
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            if !total.is_finite() {
                break;
            }
            return Err(Error::SolverFailure(format!(
                "quadrature did not converge on [{lo}, {hi}]: value {total:e}, error {err:e}"
            )));
        }
        let p = heap.pop().expect("heap is nonempty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(&f, p.a, m);
        let (v2, e2) = kronrod(&f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
        // Running sums drift; resum exactly once errors get small.
        if err <= abs_tol.max(rel_tol * total.abs()) {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    if !total.is_finite() {
        return Err(Error::SolverFailure("quadrature produced a non-finite value".into()));
    }
    Ok(QuadResult { value: sign * total, abs_error: err, evaluations: evals })
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + u/(1-u)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let g = |u: f64| {
        let w = 1.0 - u;
        let x = a + u / w;
        let y = f(x);
        if y == 0.0 {
            0.0
        } else {
            y / (w * w)
        }
    };
    integrate(g, 0.0, 1.0, abs_tol, rel_tol)
}

/// Composite Simpson rule on uniformly spaced samples (odd sample count
/// required; an even count falls back to a trapezoid on the last interval).
pub fn simpson_uniform(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (samples[0] + samples[1]);
    }
    let last = if n % 2 == 1 { n - 1 } else { n - 2 };
    let mut s = samples[0] + samples[last];
    for (i, v) in samples.iter().enumerate().take(last).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = s * h / 3.0;
    if last != n - 1 {
        // 3-point end correction keeps fourth order on the trailing interval.
        let (a, b, c) = (samples[n - 3], samples[n - 2], samples[n - 1]);
        total += h * (-a + 8.0 * b + 5.0 * c) / 12.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 1e-14).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate(f64::exp, 0.0, 1.0, 1e-14, 1e-14).unwrap().value;
        let b = integrate(f64::exp, 1.0, 0.0, 1e-14, 1e-14).unwrap().value;
        assert_eq!(a, -b);
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn peaked_integrand() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((r.value - exact).abs() / exact < 1e-11);
    }

    #[test]
    fn half_line() {
        let r = integrate_to_infinity(|x| (-2.0 * x).exp(), 1.0, 1e-15, 1e-13).unwrap();
        assert!((r.value - 0.5 * (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn simpson_is_fourth_order() {
        let n = 101;
        let h = 1.0 / (n - 1) as f64;
        let s: Vec<f64> = (0..n).map(|i| (i as f64 * h).exp()).collect();
        assert!((simpson_uniform(&s, h) - (1f64.exp() - 1.0)).abs() < 1e-9);
        let s: Vec<f64> = (0..n - 1).map(|i| (i as f64 * h).exp()).collect();
        let exact = ((n - 2) as f64 * h).exp() - 1.0;
        // The trailing interval contributes h⁴f‴/24.
        assert!((simpson_uniform(&s, h) - exact).abs() < 3e-9);
    }
}
