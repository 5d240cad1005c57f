//! Coefficient functions of the cusp parameter s: exact exponential sums or
//! samples on a uniform grid.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Uniform grid s_i = i·h, i < len.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub h: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(s_max: f64, intervals: usize) -> Result<Self> {
        if !(s_max > 0.0 && s_max.is_finite()) || intervals < 8 {
            return Err(Error::Domain(format!("bad grid: s_max={s_max}, intervals={intervals}")));
        }
        Ok(Self { h: s_max / intervals as f64, len: intervals + 1 })
    }

    /// Grid used for sampling closed-form coefficients: [0, 12] with 2048 intervals.
    pub fn standard() -> Self {
        Self { h: 12.0 / 2048.0, len: 2049 }
    }

    pub fn s(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn s_max(&self) -> f64 {
        self.s(self.len - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.s(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub rate: f64,
}

/// Σ coeff·e^{rate·s}, rates distinct, no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpSum(pub Vec<ExpTerm>);

impl ExpSum {
    pub fn constant(c: Complex64) -> Self {
        Self::exp(c, 0.0)
    }

    pub fn exp(c: Complex64, rate: f64) -> Self {
        let mut s = Self(vec![ExpTerm { coeff: c, rate }]);
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.0.sort_by(|a, b| a.rate.total_cmp(&b.rate));
        let mut out: Vec<ExpTerm> = Vec::with_capacity(self.0.len());
        for t in self.0.drain(..) {
            match out.last_mut() {
                Some(last) if last.rate == t.rate => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        self.0 = out;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|t| t.coeff == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.0.iter().map(|t| t.coeff * (t.rate * s).exp()).sum()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut r = Self(self.0.iter().map(|t| ExpTerm { coeff: t.coeff * z, rate: t.rate }).collect());
        r.normalize();
        r
    }

    pub fn shift(&self, rate: f64) -> Self {
        Self(self.0.iter().map(|t| ExpTerm { coeff: t.coeff, rate: t.rate + rate }).collect())
    }

    pub fn derivative(&self) -> Self {
        self.scale_each(|t| t.coeff * t.rate)
    }

    fn scale_each(&self, f: impl Fn(&ExpTerm) -> Complex64) -> Self {
        let mut r = Self(self.0.iter().map(|t| ExpTerm { coeff: f(t), rate: t.rate }).collect());
        r.normalize();
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = Self(self.0.iter().chain(&other.0).copied().collect());
        r.normalize();
        r
    }

    /// |self|² as an exponential sum with real rates.
    pub fn norm_sq(&self) -> Self {
        let mut terms = Vec::with_capacity(self.0.len() * self.0.len());
        for a in &self.0 {
            for b in &self.0 {
                terms.push(ExpTerm { coeff: a.coeff * b.coeff.conj(), rate: a.rate + b.rate });
            }
        }
        let mut r = Self(terms);
        r.normalize();
        r
    }

    /// ∫_u^K of the real part; `K = ∞` requires every rate to be negative.
    pub fn integrate_re(&self, u: f64, k: f64) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.0 {
            let c = t.coeff.re;
            if c == 0.0 {
                continue;
            }
            if k.is_infinite() {
                if t.rate >= 0.0 {
                    return Err(Error::Divergence(format!(
                        "integrand term {c:e}·e^({}s) does not decay",
                        t.rate
                    )));
                }
                total += -c * (t.rate * u).exp() / t.rate;
            } else if t.rate == 0.0 {
                total += c * (k - u);
            } else {
                total += c * ((t.rate * k).exp() - (t.rate * u).exp()) / t.rate;
            }
        }
        Ok(total)
    }
}

/// Fourth-order first derivative of uniformly spaced samples.
pub fn stencil_derivative(y: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = y.len();
    assert!(n >= 5, "stencil needs at least five samples");
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let k = 1.0 / (12.0 * h);
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) * k;
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * k;
    for i in 2..n - 2 {
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) * k;
    }
    d[n - 2] = -(-3.0 * y[n - 1] - 10.0 * y[n - 2] + 18.0 * y[n - 3] - 6.0 * y[n - 4] + y[n - 5]) * k;
    d[n - 1] = -(-25.0 * y[n - 1] + 48.0 * y[n - 2] - 36.0 * y[n - 3] + 16.0 * y[n - 4] - 3.0 * y[n - 5]) * k;
    d
}

/// Cubic Lagrange interpolation of grid samples at `s` ∈ [0, s_max].
pub fn interpolate<T>(y: &[T], grid: &Grid, s: f64) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let x = s / grid.h;
    let n = y.len();
    let i0 = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let mut acc: Option<T> = None;
    for j in 0..4 {
        let xj = (i0 + j) as f64;
        let mut w = 1.0;
        for m in 0..4 {
            if m != j {
                let xm = (i0 + m) as f64;
                w *= (x - xm) / (xj - xm);
            }
        }
        let term = y[i0 + j] * w;
        acc = Some(match acc {
            None => term,
            Some(a) => a + term,
        });
    }
    acc.expect("four points")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Coeff {
    ClosedForm(ExpSum),
    Samples(Vec<Complex64>),
}

impl Coeff {
    pub fn samples(&self, grid: &Grid) -> Vec<Complex64> {
        match self {
            Coeff::ClosedForm(e) => grid.points().map(|s| e.eval(s)).collect(),
            Coeff::Samples(v) => v.clone(),
        }
    }

    pub fn at(&self, grid: &Grid, i: usize) -> Complex64 {
        match self {
            Coeff::ClosedForm(e) => e.eval(grid.s(i)),
            Coeff::Samples(v) => v[i],
        }
    }

    pub fn eval(&self, grid: &Grid, s: f64) -> Complex64 {
        match self {
            Coeff::ClosedForm(e) => e.eval(s),
            Coeff::Samples(v) => interpolate(v, grid, s),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::ClosedForm(e) => e.is_zero(),
            Coeff::Samples(v) => v.iter().all(|z| z.norm_sqr() == 0.0),
        }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        match self {
            Coeff::ClosedForm(e) => Coeff::ClosedForm(e.scale(z)),
            Coeff::Samples(v) => Coeff::Samples(v.iter().map(|x| x * z).collect()),
        }
    }

    /// Multiplies by e^{rate·s}.
    pub fn mul_exp(&self, grid: &Grid, rate: f64) -> Self {
        match self {
            Coeff::ClosedForm(e) => Coeff::ClosedForm(e.shift(rate)),
            Coeff::Samples(v) => {
                Coeff::Samples(v.iter().enumerate().map(|(i, x)| x * (rate * grid.s(i)).exp()).collect())
            }
        }
    }

    pub fn derivative(&self, grid: &Grid) -> Self {
        match self {
            Coeff::ClosedForm(e) => Coeff::ClosedForm(e.derivative()),
            Coeff::Samples(v) => Coeff::Samples(stencil_derivative(v, grid.h)),
        }
    }

    pub fn add(&self, other: &Self, grid: &Grid) -> Self {
        match (self, other) {
            (Coeff::ClosedForm(a), Coeff::ClosedForm(b)) => Coeff::ClosedForm(a.add(b)),
            _ => {
                let a = self.samples(grid);
                let b = other.samples(grid);
                Coeff::Samples(a.iter().zip(&b).map(|(x, y)| x + y).collect())
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Coeff::ClosedForm(_))
    }
}
