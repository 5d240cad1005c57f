//! Radial ODE systems for the matrix coefficients of degree-1 forms on
//! SU(n,1) and degree-k forms on SO(n,1), together with the DeGeorge–Wallach
//! denominator integral.
//!
//! Both systems are linear with a regular singular point at t = 0. Written in
//! the variables (g, s) = (first − second, second) they read
//! Y′ = (coth·A + csch·B + tanh·T)·Y, which is what the series start uses.

use crate::error::{Error, Result};
use crate::geometry::{volume_density, Kind, RankOneSpace};
use crate::ode::{rk4_fixed, Dopri, DopriOptions};
use crate::quad;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-10;
const OUTPUT_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    SU,
    SO,
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SU" => Ok(Group::SU),
            "SO" => Ok(Group::SO),
            other => Err(Error::Parse(format!("unknown group {other:?} (expected SU or SO)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffSystem {
    pub group: Group,
    pub n: u32,
    pub degree: u32,
}

type M2 = [[f64; 2]; 2];

impl CoeffSystem {
    pub fn new(group: Group, n: u32, degree: u32) -> Result<Self> {
        match group {
            Group::SU if degree != 1 || n < 2 => Err(Error::Domain(format!(
                "SU(n,1) system needs degree 1 and n ≥ 2, got n={n}, degree={degree}"
            ))),
            Group::SO if degree < 1 || 2 * degree > n - 1 || n < 3 => Err(Error::Domain(format!(
                "SO(n,1) system needs 1 ≤ k ≤ (n−1)/2, got n={n}, k={degree}"
            ))),
            _ => Ok(Self { group, n, degree }),
        }
    }

    /// The symmetric space whose volume density weighs the denominator.
    pub fn space(&self) -> RankOneSpace {
        match self.group {
            Group::SU => RankOneSpace { kind: Kind::C, n: self.n },
            Group::SO => RankOneSpace { kind: Kind::R, n: self.n },
        }
    }

    pub fn labels(&self) -> (&'static str, &'static str) {
        match self.group {
            Group::SU => ("phi", "psi"),
            Group::SO => ("f", "b"),
        }
    }

    pub fn is_critical(&self) -> bool {
        self.group == Group::SO && 2 * self.degree + 1 == self.n
    }

    /// Values at t = 0 forced by regularity: (1, 1/n) or (1, k/n).
    pub fn initial_value(&self) -> [f64; 2] {
        let n = self.n as f64;
        match self.group {
            Group::SU => [1.0, 1.0 / n],
            Group::SO => [1.0, self.degree as f64 / n],
        }
    }

    fn matrices(&self) -> (M2, M2, M2) {
        let n = self.n as f64;
        match self.group {
            Group::SU => (
                [[-1.0, n - 1.0], [0.0, -(2.0 * n - 2.0)]],
                [[-1.0, n - 1.0], [2.0, 0.0]],
                [[0.0, 0.0], [0.0, -2.0]],
            ),
            Group::SO => {
                let k = self.degree as f64;
                ([[-k, 0.0], [0.0, -(n - k)]], [[0.0, n - k], [k, 0.0]], [[0.0; 2]; 2])
            }
        }
    }

    fn rhs_unchecked(&self, t: f64, y: &[f64; 2]) -> [f64; 2] {
        let (a, b, c) = self.matrices();
        let (ct, cs, th) = (1.0 / t.tanh(), 1.0 / t.sinh(), t.tanh());
        let v = [y[0] - y[1], y[1]];
        let mut d = [0.0; 2];
        for i in 0..2 {
            for j in 0..2 {
                d[i] += (ct * a[i][j] + cs * b[i][j] + th * c[i][j]) * v[j];
            }
        }
        [d[0] + d[1], d[1]]
    }
}

/// Derivative of the natural state (φ, ψ) or (f, b).
pub fn system_rhs(sys: &CoeffSystem, t: f64, state: [f64; 2]) -> Result<[f64; 2]> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("the system is singular at t = {t}; start from series_init")));
    }
    Ok(sys.rhs_unchecked(t, &state))
}

/// Regular solution at `eps` from the two-term expansion Y0 + eps²·Y2.
pub fn series_init(sys: &CoeffSystem, eps: f64) -> Result<[f64; 2]> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::Domain(format!("series start needs 0 < eps ≤ 1e-3, got {eps}")));
    }
    let (a, b, c) = sys.matrices();
    // t·coth t = 1 + t²/3, t·csch t = 1 − t²/6, t·tanh t = t² + O(t⁴).
    let a0 = |i: usize, j: usize| a[i][j] + b[i][j];
    let a2 = |i: usize, j: usize| a[i][j] / 3.0 - b[i][j] / 6.0 + c[i][j];
    let y0 = sys.initial_value();
    let v0 = [y0[0] - y0[1], y0[1]];
    let rhs = [a2(0, 0) * v0[0] + a2(0, 1) * v0[1], a2(1, 0) * v0[0] + a2(1, 1) * v0[1]];
    let m = [[2.0 - a0(0, 0), -a0(0, 1)], [-a0(1, 0), 2.0 - a0(1, 1)]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let v2 = [
        (m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
        (-m[1][0] * rhs[0] + m[0][0] * rhs[1]) / det,
    ];
    let e2 = eps * eps;
    let g = v0[0] + e2 * v2[0];
    let s = v0[1] + e2 * v2[1];
    Ok([g + s, s])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTrajectory {
    pub system: CoeffSystem,
    pub t_grid: Vec<f64>,
    pub states: Vec<[f64; 2]>,
    pub local_errors: Vec<f64>,
    /// Running integral ∫₀^t (first state)²·(volume density).
    pub denominators: Vec<f64>,
    pub derived_init: [f64; 2],
    pub tol: f64,
}

impl CoeffTrajectory {
    pub fn t_end(&self) -> f64 {
        *self.t_grid.last().expect("nonempty")
    }

    pub fn to_csv(&self) -> String {
        let (a, b) = self.system.labels();
        let mut s = format!("t,{a},{b},localError\n");
        for ((t, y), e) in self.t_grid.iter().zip(&self.states).zip(&self.local_errors) {
            writeln!(s, "{t:.12e},{:.15e},{:.15e},{e:.3e}", y[0], y[1]).expect("string write");
        }
        s
    }
}

fn augmented(sys: CoeffSystem) -> impl FnMut(f64, &[f64; 3]) -> [f64; 3] {
    let space = sys.space();
    move |t, y| {
        let d = sys.rhs_unchecked(t, &[y[0], y[1]]);
        [d[0], d[1], y[0] * y[0] * volume_density(&space, t)]
    }
}

fn dopri_options(tol: f64) -> DopriOptions {
    DopriOptions { rtol: tol, atol: 1e-300, h_init: 1e-5, h_min: 1e-13, h_max: OUTPUT_STEP, max_steps: 5_000_000 }
}

fn initial_denominator(sys: &CoeffSystem, eps: f64) -> f64 {
    let (ml, m2l) = sys.space().root_multiplicities();
    let p = (ml + m2l + 1) as f64;
    eps.powf(p) / p
}

pub fn integrate(sys: &CoeffSystem, t_end: f64, tol: f64) -> Result<CoeffTrajectory> {
    integrate_from(sys, DEFAULT_EPS, t_end, tol)
}

/// Adaptive Dormand–Prince integration from the series start at `eps`.
pub fn integrate_from(sys: &CoeffSystem, eps: f64, t_end: f64, tol: f64) -> Result<CoeffTrajectory> {
    if !(1e-12..1.0).contains(&tol) {
        return Err(Error::Domain(format!("tolerance must lie in [1e-12, 1), got {tol}")));
    }
    if !(t_end <= 50.0 && t_end >= eps) {
        return Err(Error::Domain(format!("t_end must lie in [{eps}, 50], got {t_end}")));
    }
    let y0 = series_init(sys, eps)?;
    let d0 = initial_denominator(sys, eps);
    let mut tr = CoeffTrajectory {
        system: *sys,
        t_grid: vec![eps],
        states: vec![y0],
        local_errors: vec![0.0],
        denominators: vec![d0],
        derived_init: sys.initial_value(),
        tol,
    };
    let mut solver = Dopri::new(augmented(*sys), eps, [y0[0], y0[1], d0], dopri_options(tol));
    while solver.t < t_end {
        let err = solver.step_towards(t_end)?;
        let y = solver.y;
        if !(y[0] > 0.0 && y[1] > 0.0) {
            return Err(Error::SolverFailure(format!("state lost positivity at t = {}", solver.t)));
        }
        tr.t_grid.push(solver.t);
        tr.states.push([y[0], y[1]]);
        tr.local_errors.push(err);
        tr.denominators.push(y[2]);
    }
    Ok(tr)
}

/// ∫₀^R φ²·sinh^{m(λ)+m(2λ)}·cosh^{m(2λ)} dt along the trajectory.
pub fn dw_denominator(space: &RankOneSpace, traj: &CoeffTrajectory, r: f64) -> Result<f64> {
    let own = traj.system.space();
    if own.kind != space.kind || own.n != space.n {
        return Err(Error::Domain(format!("trajectory belongs to {own}, not {space}")));
    }
    let t0 = traj.t_grid[0];
    if !(r >= t0 && r <= traj.t_end()) {
        return Err(Error::Domain(format!("R = {r} outside the trajectory range [{t0}, {}]", traj.t_end())));
    }
    let i = traj.t_grid.partition_point(|&t| t <= r) - 1;
    if traj.t_grid[i] == r {
        return Ok(traj.denominators[i]);
    }
    let y = traj.states[i];
    let mut solver = Dopri::new(
        augmented(traj.system),
        traj.t_grid[i],
        [y[0], y[1], traj.denominators[i]],
        dopri_options(traj.tol.min(1e-11).max(1e-12)),
    );
    solver.advance_to(r)?;
    Ok(solver.y[2])
}

/// Classical RK4 oracle from the series start at `eps` with constant step
/// `h`; returns the states at the requested times (which must be reachable
/// in whole steps from `eps`, up to rounding).
pub fn rk4_oracle(sys: &CoeffSystem, eps: f64, h: f64, times: &[f64]) -> Result<Vec<[f64; 2]>> {
    let y0 = series_init(sys, eps)?;
    let t_max = times.iter().cloned().fold(eps, f64::max);
    let steps = ((t_max - eps) / h).round() as usize;
    let mut out = vec![[f64::NAN; 2]; times.len()];
    let idx: Vec<usize> = times.iter().map(|t| ((t - eps) / h).round() as usize).collect();
    let mut s = 0usize;
    rk4_fixed(|t, y: &[f64; 2]| sys.rhs_unchecked(t, y), eps, y0, h, steps, 1, |_, y| {
        for (o, &i) in out.iter_mut().zip(&idx) {
            if i == s {
                *o = *y;
            }
        }
        s += 1;
    });
    Ok(out)
}

/// Explicit lower constant for f·sinh^k on [1, ∞) in the SO system.
pub fn so_lower_constant(n: u32, k: u32) -> Result<f64> {
    if k < 1 || 2 * k >= n {
        return Err(Error::Domain(format!("constant needs 1 ≤ k < n/2, got n={n}, k={k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let integrand = |s: f64| {
        let th = (s / 2.0).tanh();
        2.0 * (nf - 2.0 * kf) * (s / 2.0).cosh().powi(2) * th * th / s.sinh() * (kf / nf)
    };
    let i = quad::integrate(integrand, 0.0, 1.0, 1e-15, 1e-14)?.value;
    Ok((-i).exp() * (nf - kf) * 2f64.powi(k as i32) * 0.5f64.tanh().powi(k as i32) / nf)
}

/// Lower constant (n−1)/n·tanh²(1/2)·e^{−1} for sinh·tanh(t/2)·(φ−ψ), t ≥ 1.
pub fn su_lower_constant(n: u32) -> f64 {
    let nf = n as f64;
    (nf - 1.0) / nf * 0.5f64.tanh().powi(2) * (-1f64).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured quantity (a minimum, maximum or residual).
    pub value: f64,
    pub threshold: f64,
    /// Signed distance to failure; nonnegative means pass.
    pub margin: f64,
    pub pass: bool,
    /// Non-blocking checks are recorded but never fail a report.
    pub blocking: bool,
}

impl Check {
    fn at_least(name: &str, value: f64, threshold: f64, blocking: bool) -> Self {
        let margin = value - threshold;
        Self { name: name.into(), value, threshold, margin, pass: margin >= 0.0, blocking }
    }
    fn at_most(name: &str, value: f64, threshold: f64, blocking: bool) -> Self {
        let margin = threshold - value;
        Self { name: name.into(), value, threshold, margin, pass: margin >= 0.0, blocking }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub system: CoeffSystem,
    pub checks: Vec<Check>,
}

impl AsymptoticsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || !c.blocking)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Relative residual of `lhs = rhs`, scaled by the largest term involved.
fn rel(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(lhs.abs()).max(rhs.abs()).max(f64::MIN_POSITIVE)
}

pub const IDENTITY_TOL: f64 = 1e-8;
/// Identity residuals are measured on t ≥ IDENTITY_T_MIN.
pub const IDENTITY_T_MIN: f64 = 1e-2;

/// Checks the asymptotic claims and integrating-factor identities along a
/// trajectory. Range checks use the nodes with t ∈ [1, t_end].
pub fn verify_asymptotics(traj: &CoeffTrajectory) -> AsymptoticsReport {
    let sys = traj.system;
    let n = sys.n as f64;
    let k = sys.degree as f64;
    let mut checks = Vec::new();
    let nodes = || traj.t_grid.iter().zip(&traj.states);
    let tail = || nodes().filter(|(t, _)| **t >= 1.0);
    // Near t = 0 the state carries its O(t²) differences below rounding.
    let regular = || nodes().filter(|(t, _)| **t >= IDENTITY_T_MIN);
    let min_of = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let positivity = min_of(&mut nodes().map(|(_, y)| y[1].min(y[0] - y[1])));
    checks.push(Check::at_least("positivity", positivity, 0.0, true));
    match sys.group {
        Group::SU => {
            let dom = min_of(&mut nodes().map(|(_, y)| (y[0] - n * y[1]) / y[0]));
            checks.push(Check::at_least("phi_ge_n_psi", dom, -1e-10, true));
            let f = |t: f64, y: &[f64; 2]| t.sinh() * (t / 2.0).tanh().powi(2 * sys.n as i32 - 1) * (y[0] - n * y[1]);
            let vals: Vec<f64> = nodes().map(|(t, y)| f(*t, y)).collect();
            let drop = vals.windows(2).map(|w| (w[1] - w[0]) / w[1].abs().max(w[0].abs()).max(1e-300));
            checks.push(Check::at_least("monotone_weighted_phi_minus_n_psi", min_of(&mut drop.into_iter()), -1e-9, true));
            let boundary = min_of(&mut tail().map(|(t, y)| t.sinh() * (t / 2.0).tanh() * (y[0] - y[1])));
            checks.push(Check::at_least("boundary_functional_lower", boundary, su_lower_constant(sys.n), true));
            let sp: Vec<f64> = tail().map(|(t, y)| t.sinh() * y[0]).collect();
            checks.push(Check::at_least("sinh_phi_inf", min_of(&mut sp.iter().cloned()), 0.0, true));
            let sup = max_of(&mut sp.iter().cloned());
            checks.push(Check::at_most("sinh_phi_sup", sup, 2.0, false));
            let ratio = max_of(&mut nodes().map(|(t, y)| t.sinh() / (t / 2.0).tanh() * y[0]));
            checks.push(Check::at_most("upper_constant_sinh_phi_over_tanh_half", ratio, 2.0, true));
            checks.push(Check::at_most("upper_constant_printed_form", ratio, 1.0, false));
            // Integrating-factor identities evaluated through the system.
            let mut r1: f64 = 0.0;
            let mut r2: f64 = 0.0;
            let mut r3: f64 = 0.0;
            for (t, y) in regular() {
                let (t, d) = (*t, sys.rhs_unchecked(*t, y));
                let (sh, ch, th, h2) = (t.sinh(), t.cosh(), t.tanh(), (t / 2.0).tanh());
                let g = y[0] - y[1];
                let gd = d[0] - d[1];
                // [sinh·tanh(t/2)·(φ−ψ)]′ = (n−1)(cosh+1)tanh(t/2)ψ
                let p = sh * h2;
                let dp = ch * h2 + sh * 0.5 / (t / 2.0).cosh().powi(2);
                let a = dp * g;
                let b = p * gd;
                r1 = r1.max(rel(a + b, (n - 1.0) * (ch + 1.0) * h2 * y[1], a.abs() + b.abs()));
                // [sinh·tanh^{2n−1}(t/2)·(φ−nψ)]′ = (2n−2)[(n−1)(cosh−1)/sinh + tanh]·sinh·tanh^{2n−1}(t/2)·ψ
                let e = 2 * sys.n as i32 - 1;
                let q = sh * h2.powi(e);
                let dq = q * (ch / sh + (e as f64) / sh);
                let w = y[0] - n * y[1];
                let wd = d[0] - n * d[1];
                let lhs = (dq * w, q * wd);
                let rhs = (2.0 * n - 2.0) * ((n - 1.0) * (ch - 1.0) / sh + th) * q * y[1];
                r2 = r2.max(rel(lhs.0 + lhs.1, rhs, lhs.0.abs() + lhs.1.abs()));
                // [(sinh/tanh(t/2))·φ]′ = −[(n−2)(cosh−1)/sinh + 2tanh]·(sinh/tanh(t/2))·ψ
                let s = 1.0 + ch;
                let lhs = (sh * y[0], s * d[0]);
                let rhs = -((n - 2.0) * (ch - 1.0) / sh + 2.0 * th) * s * y[1];
                r3 = r3.max(rel(lhs.0 + lhs.1, rhs, lhs.0.abs() + lhs.1.abs()));
            }
            checks.push(Check::at_most("identity_boundary_functional", r1, IDENTITY_TOL, true));
            checks.push(Check::at_most("identity_weighted_phi_minus_n_psi", r2, IDENTITY_TOL, true));
            checks.push(Check::at_most("identity_phi_integrating_factor", r3, IDENTITY_TOL, true));
        }
        Group::SO => {
            let ratio = min_of(&mut nodes().map(|(_, y)| (k / n * y[0] - y[1]) / y[0]));
            checks.push(Check::at_least("b_le_k_over_n_f", ratio, -1e-9, true));
            let c = so_lower_constant(sys.n, sys.degree).unwrap_or(f64::NAN);
            let lower = min_of(&mut tail().map(|(t, y)| y[0] * t.sinh().powi(sys.degree as i32)));
            checks.push(Check::at_least("f_sinh_k_lower", lower, c, true));
            if sys.is_critical() {
                let tf = min_of(&mut tail().map(|(t, y)| t * y[0]));
                checks.push(Check::at_least("critical_t_f_lower", tf, 0.0, true));
            }
            let ki = sys.degree as i32;
            let nk = sys.n as i32 - ki;
            let mut r1: f64 = 0.0;
            let mut r2: f64 = 0.0;
            for (t, y) in regular() {
                let (t, d) = (*t, sys.rhs_unchecked(*t, y));
                let (sh, ch) = (t.sinh(), t.cosh());
                let g = y[0] - y[1];
                let gd = d[0] - d[1];
                // [sinh^k(f−b)]′ = (n−k)sinh^{k−1}b
                let a = k * sh.powi(ki - 1) * ch * g;
                let b = sh.powi(ki) * gd;
                r1 = r1.max(rel(a + b, (n - k) * sh.powi(ki - 1) * y[1], a.abs() + b.abs()));
                // [sinh^{n−k}b]′ = k·sinh^{n−k−1}(f−b)
                let a = (n - k) * sh.powi(nk - 1) * ch * y[1];
                let b = sh.powi(nk) * d[1];
                r2 = r2.max(rel(a + b, k * sh.powi(nk - 1) * g, a.abs() + b.abs()));
            }
            checks.push(Check::at_most("identity_sinh_k_f_minus_b", r1, IDENTITY_TOL, true));
            checks.push(Check::at_most("identity_sinh_n_minus_k_b", r2, IDENTITY_TOL, true));
        }
    }
    AsymptoticsReport { system: sys, checks }
}

/// Largest relative difference between the adaptive trajectory and the RK4
/// oracle (step `h`, started at `eps_oracle`) at the integer times in [1, t_end].
pub fn two_integrator_agreement(traj: &CoeffTrajectory, eps_oracle: f64, h: f64) -> Result<f64> {
    let sys = traj.system;
    let times: Vec<f64> = (1..=traj.t_end().floor() as u32).map(f64::from).collect();
    let oracle = rk4_oracle(&sys, eps_oracle, h, &times)?;
    let mut worst: f64 = 0.0;
    for (t, o) in times.iter().zip(&oracle) {
        let i = traj.t_grid.partition_point(|&s| s <= *t) - 1;
        let y = if traj.t_grid[i] == *t {
            traj.states[i]
        } else {
            let y = traj.states[i];
            let mut s = Dopri::new(augmented(sys), traj.t_grid[i], [y[0], y[1], 0.0], dopri_options(traj.tol));
            s.advance_to(*t)?;
            [s.y[0], s.y[1]]
        };
        for c in 0..2 {
            worst = worst.max(((y[c] - o[c]) / o[c]).abs());
        }
    }
    Ok(worst)
}

/// Least-squares slope of ln D(R) against R on the given radii.
pub fn log_slope(space: &RankOneSpace, traj: &CoeffTrajectory, radii: &[f64]) -> Result<f64> {
    let pts = radii
        .iter()
        .map(|&r| dw_denominator(space, traj, r).map(|d| (r, d.ln())))
        .collect::<Result<Vec<_>>>()?;
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_validation() {
        assert!(CoeffSystem::new(Group::SU, 3, 2).is_err());
        assert!(CoeffSystem::new(Group::SO, 5, 3).is_err());
        assert!(CoeffSystem::new(Group::SO, 5, 2).unwrap().is_critical());
        assert!(!CoeffSystem::new(Group::SO, 5, 1).unwrap().is_critical());
    }

    #[test]
    fn rhs_with_vanishing_second_state() {
        let sys = CoeffSystem::new(Group::SU, 3, 1).unwrap();
        let t = 0.7;
        let d = system_rhs(&sys, t, [0.4, 0.0]).unwrap();
        let expect = -(1.0 / t.tanh() + 1.0 / t.sinh()) * 0.4;
        assert!((d[0] - d[1] - expect).abs() < 1e-15);
        assert!(system_rhs(&sys, 0.0, [1.0, 0.5]).is_err());
    }

    #[test]
    fn series_values_at_origin() {
        let so = CoeffSystem::new(Group::SO, 5, 1).unwrap();
        let y = series_init(&so, 1e-4).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-7 && (y[1] - 0.2).abs() < 1e-7);
        let su = CoeffSystem::new(Group::SU, 2, 1).unwrap();
        let y = series_init(&su, 1e-4).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-7 && (y[1] - 0.5).abs() < 1e-7);
        assert!(series_init(&su, 1e-2).is_err());
    }

    /// With the quadratic term the series solves the ODE up to O(t³); the
    /// constant term alone would leave an O(t) residual of about 1e-4 here.
    #[test]
    fn series_satisfies_ode_to_second_order() {
        for sys in [CoeffSystem::new(Group::SU, 4, 1).unwrap(), CoeffSystem::new(Group::SO, 7, 2).unwrap()] {
            let (e, h) = (5e-4, 1e-6);
            let yp = series_init(&sys, e + h).unwrap();
            let ym = series_init(&sys, e - h).unwrap();
            let d = sys.rhs_unchecked(e, &series_init(&sys, e).unwrap());
            for c in 0..2 {
                let r = ((yp[c] - ym[c]) / (2.0 * h) - d[c]).abs();
                assert!(r < 1e-8, "{r}");
            }
        }
    }

    #[test]
    fn trajectory_of_zero_length() {
        let sys = CoeffSystem::new(Group::SO, 5, 1).unwrap();
        let tr = integrate(&sys, DEFAULT_EPS, 1e-10).unwrap();
        assert_eq!(tr.t_grid.len(), 1);
        assert_eq!(tr.states[0], series_init(&sys, DEFAULT_EPS).unwrap());
    }

    #[test]
    fn so_constant_closed_form() {
        for (n, k) in [(5, 1), (7, 2), (9, 3), (3, 1)] {
            let (nf, kf) = (n as f64, k as f64);
            let closed = (-2.0 * (nf - 2.0 * kf) * kf / nf * 0.5f64.cosh().ln()).exp()
                * (nf - kf)
                * 2f64.powi(k as i32)
                * 0.5f64.tanh().powi(k as i32)
                / nf;
            assert!((so_lower_constant(n, k).unwrap() / closed - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn su_constant_value() {
        assert!((su_lower_constant(2) - 0.039_280_744).abs() < 1e-8);
    }

    #[test]
    fn denominator_space_must_match() {
        let sys = CoeffSystem::new(Group::SO, 5, 1).unwrap();
        let tr = integrate(&sys, 2.0, 1e-10).unwrap();
        assert!(dw_denominator(&RankOneSpace::new(Kind::C, 5).unwrap(), &tr, 1.0).is_err());
        assert!(dw_denominator(&sys.space(), &tr, 3.0).is_err());
        // Near zero the density is ~t^4, so D(R) ≈ R^5/5 for small R.
        let d = dw_denominator(&sys.space(), &tr, 0.01).unwrap();
        assert!((d / (0.01f64.powi(5) / 5.0) - 1.0).abs() < 1e-3);
    }
}
