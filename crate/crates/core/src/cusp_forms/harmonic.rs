use super::algebra::{subsets, ExtVec};
use super::coeff::{Coeff, ExpSum, Grid};
use super::form::{certify_harmonic, harmonic_residuals, CuspForm, DecayTag};
use super::model::CuspModel;
use super::norms::slab_l2_norm;
use crate::error::{Error, Result};
use crate::ode::{Dopri, DopriOptions};
use crate::price::CuspKind;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Residual threshold for closed-form harmonic families.
pub const EXACT_HARMONIC_TOL: f64 = 1e-10;
/// Residual threshold for numerically solved modes.
pub const SOLVED_HARMONIC_TOL: f64 = 1e-8;

/// Tangential multi-indices of the given degree, lexicographic.
pub fn tangential_indices(model: &CuspModel, degree: u32) -> Vec<u32> {
    subsets(1, model.real_dim(), degree)
}

/// Zero-mode harmonic form Σ a_I dt^I + Σ b_J e^{2s} ds∧dt^J in the middle
/// degree k = (n−1)/2 of a real cusp with n odd. `a` is indexed by
/// `tangential_indices(k)` and `b` by `tangential_indices(k−1)`.
pub fn make_zero_mode(model: &CuspModel, a: &[f64], b: &[f64]) -> Result<CuspForm> {
    if model.kind() != CuspKind::Real {
        return Err(Error::Domain("zero-mode family is defined on real cusps".into()));
    }
    let n = model.n();
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("zero-mode family needs n odd, got n = {n}")));
    }
    let k = (n - 1) / 2;
    let ia = tangential_indices(model, k);
    let ib = tangential_indices(model, k - 1);
    if a.len() != ia.len() || b.len() != ib.len() {
        return Err(Error::Domain(format!(
            "expected {} tangential and {} radial coefficients, got {} and {}",
            ia.len(),
            ib.len(),
            a.len(),
            b.len()
        )));
    }
    let zero = vec![0i64; model.cross_dim()];
    let mut f = CuspForm::new(model, k, Grid::standard())?;
    for (&m, &x) in ia.iter().zip(a) {
        f.add_term(model, &zero, m, Coeff::ClosedForm(ExpSum::constant(Complex64::new(x, 0.0))))?;
    }
    for (&m, &x) in ib.iter().zip(b) {
        f.add_term(model, &zero, m | 1, Coeff::ClosedForm(ExpSum::exp(Complex64::new(x, 0.0), 2.0)))?;
    }
    certify_harmonic(model, f, EXACT_HARMONIC_TOL)
}

/// Orthonormal u = v/|v| followed by k−1 vectors orthogonal to it.
fn frame(v: &[f64], count: usize) -> Vec<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut q: Vec<Vec<f64>> = vec![v.iter().map(|x| x / norm).collect()];
    for i in 0..v.len() {
        if q.len() >= count {
            break;
        }
        let mut w = vec![0.0; v.len()];
        w[i] = 1.0;
        for b in &q {
            let p: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in w.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if wn > 1e-6 {
            q.push(w.iter().map(|x| x / wn).collect());
        }
    }
    q
}

/// Diagnostics of a solved mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolveInfo {
    pub kappa: f64,
    pub s_max: f64,
    pub intervals: usize,
    pub d_residual: f64,
    pub delta_residual: f64,
    pub steps: usize,
}

/// L² harmonic k-form on a single Fourier mode v ≠ 0 of a real cusp,
/// normalized to unit L² norm on Ω_{0,∞}.
///
/// The form is e^{2πi⟨v,t⟩}(a(s) ν∧β + b(s) ds∧β) with ν = v/|v| and β a unit
/// (k−1)-vector orthogonal to ν. Closedness gives a' = iκb, co-closedness
/// (e^{cs}a')' = κ²e^{(c+2)s}a with κ = 2π|v| and c = 2k−n−1. The decaying
/// branch is selected by integrating backward from s_max.
pub fn solve_harmonic_mode(model: &CuspModel, k: u32, dual_coords: &[i64]) -> Result<CuspForm> {
    solve_harmonic_mode_with_info(model, k, dual_coords).map(|(f, _)| f)
}

pub fn solve_harmonic_mode_with_info(
    model: &CuspModel,
    k: u32,
    dual_coords: &[i64],
) -> Result<(CuspForm, ModeSolveInfo)> {
    if model.kind() != CuspKind::Real {
        return Err(Error::Domain("harmonic mode solver works on real cusps".into()));
    }
    let n = model.n();
    if k == 0 || 2 * k > n - 1 {
        return Err(Error::Domain(format!("mode solver needs 1 ≤ k ≤ (n−1)/2, got n = {n}, k = {k}")));
    }
    let v = model.frequency(dual_coords)?;
    let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if vnorm == 0.0 {
        return Err(Error::Domain("mode solver needs a nonzero frequency".into()));
    }
    let kappa = 2.0 * PI * vnorm;
    let c = 2.0 * k as f64 - n as f64 - 1.0;
    let p = -c / 2.0;

    let per_unit = (500.0_f64).max(200.0 * (kappa + 4.0)).ceil() as usize;
    let s_max = ((1.0 + 200.0 / kappa).ln().max(3.0) * per_unit as f64).ceil() / per_unit as f64;
    let intervals = (s_max * per_unit as f64).round() as usize;
    let grid = Grid::new(s_max, intervals)?;

    // Backward sweep on (a, w = e^{cs}a').
    let rhs = move |s: f64, y: &[f64; 2]| [(-c * s).exp() * y[1], kappa * kappa * ((c + 2.0) * s).exp() * y[0]];
    let y_end = s_max.exp();
    let log_slope = -kappa * y_end + (p - 0.5) - (4.0 * p * p - 1.0) / (8.0 * kappa * y_end);
    let seed = [1.0, (c * s_max).exp() * log_slope];
    let opts = DopriOptions { rtol: 1e-12, atol: 1e-300, h_init: grid.h, h_min: 1e-14, h_max: grid.h, max_steps: 5_000_000 };
    let mut ode = Dopri::new(rhs, s_max, seed, opts);
    let mut a = vec![0.0; grid.len];
    let mut w = vec![0.0; grid.len];
    a[grid.len - 1] = seed[0];
    w[grid.len - 1] = seed[1];
    for i in (0..grid.len - 1).rev() {
        ode.advance_to(grid.s(i))?;
        a[i] = ode.y[0];
        w[i] = ode.y[1];
        if a[i].abs() > 1e100 {
            for j in i..grid.len {
                a[j] *= 1e-100;
                w[j] *= 1e-100;
            }
            let steps = ode.steps;
            ode = Dopri::new(rhs, ode.t, [a[i], w[i]], opts);
            ode.steps = steps;
        }
        if !(a[i].is_finite() && w[i].is_finite()) {
            return Err(Error::SolverFailure(format!("backward sweep diverged at s = {}", grid.s(i))));
        }
    }
    if a[0] <= 0.0 || w[0] >= 0.0 {
        return Err(Error::SolverFailure(format!(
            "no monotone decaying solution: a(0) = {:e}, a'(0) scaled = {:e}",
            a[0], w[0]
        )));
    }

    // Squares of samples this far below the peak are subnormal.
    let peak = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (ai, wi) in a.iter_mut().zip(w.iter_mut()) {
        if ai.abs() < 1e-140 * peak {
            *ai = 0.0;
            *wi = 0.0;
        }
    }

    let q = frame(&v, k as usize);
    let mut beta = ExtVec::one();
    for vec in q[1..].iter().rev() {
        beta = beta.wedge_left(vec, 1);
    }
    let nu_beta = beta.wedge_left(&q[0], 1);

    let a_s: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let b_s: Vec<Complex64> =
        w.iter().enumerate().map(|(i, &x)| Complex64::new(0.0, -(-c * grid.s(i)).exp() * x / kappa)).collect();
    let mut f = CuspForm::new(model, k, grid)?;
    for (&m, &coef) in &nu_beta.0 {
        f.add_term(model, dual_coords, m, Coeff::Samples(a_s.iter().map(|z| z * coef).collect()))?;
    }
    for (&m, &coef) in &beta.0 {
        f.add_term(model, dual_coords, m | 1, Coeff::Samples(b_s.iter().map(|z| z * coef).collect()))?;
    }

    // Tail: the slice mass decays like exp(−2κe^s); bound it by its local exponential rate.
    let mass = |i: usize| super::norms::slice_integral(model, &f, grid.s(i), &|_| 1.0);
    let (g1, g0) = (mass(grid.len - 1), mass(grid.len - 2));
    let rate = if g1 > 0.0 && g0 > 0.0 { (g0 / g1).ln() / grid.h } else { 2.0 * kappa * y_end };
    f.decay = Some(DecayTag { tail_mass: g1 / rate, tail_rate: rate });
    let total = slab_l2_norm(model, &f, 0.0, f64::INFINITY)?;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::SolverFailure(format!("mode has L² norm {total:e}")));
    }
    let f = f.scale(Complex64::new(1.0 / total.sqrt(), 0.0));
    let (dr, deltar) = harmonic_residuals(model, &f)?;
    let info = ModeSolveInfo {
        kappa,
        s_max,
        intervals,
        d_residual: dr,
        delta_residual: deltar,
        steps: ode.steps,
    };
    let f = certify_harmonic(model, f, SOLVED_HARMONIC_TOL).map_err(|e| {
        Error::SolverFailure(format!("{e}; κ = {kappa}, s_max = {s_max}, {intervals} intervals"))
    })?;
    Ok((f, info))
}
