//! Verification suites, one per acceptance criterion. Reports carry no
//! timings so that repeated runs with one seed serialize identically.

use crate::commands::{rate_row, so_noncritical};
use num_complex::Complex64;
use num_rational::Rational64;
use pricebench_core::bounds::{self, Setting};
use pricebench_core::cusp_forms::{
    critical_inequality, cusp_price_check, harmonic_residuals, make_zero_mode, primitive_check, slab_l2_norm,
    slice_profile, solve_harmonic_mode, verify_cusp_balance, Coeff, CuspForm, CuspModel, ExpSum, Grid,
};
use pricebench_core::geometry::{Kind, RankOneSpace};
use pricebench_core::lattice::{self, IntegerLattice, DEFAULT_BUDGET};
use pricebench_core::matrix_coeff::{self, CoeffSystem, Group};
use pricebench_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Suite names in criterion order.
pub const SUITES: [(&str, u32); 9] = [
    ("exponents", 1),
    ("so-ode", 2),
    ("critical", 3),
    ("su-ode", 4),
    ("rates", 5),
    ("lattice", 6),
    ("cusp", 7),
    ("peaking", 8),
    ("bookkeeping", 9),
];

pub fn criterion_of(name: &str) -> Option<u32> {
    SUITES.iter().find(|s| s.0 == name).map(|s| s.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    /// Non-blocking checks record a value without failing the suite.
    pub blocking: bool,
    pub value: f64,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl SuiteCheck {
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), pass: value >= threshold, blocking: true, value, threshold: Some(threshold), detail: String::new() }
    }

    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), pass: value <= threshold, blocking: true, value, threshold: Some(threshold), detail: String::new() }
    }

    /// Strict `value > threshold`.
    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), pass: value > threshold, blocking: true, value, threshold: Some(threshold), detail: String::new() }
    }

    /// Strict `value < threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), pass: value < threshold, blocking: true, value, threshold: Some(threshold), detail: String::new() }
    }

    pub fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, blocking: true, value: if pass { 1.0 } else { 0.0 }, threshold: None, detail: detail.into() }
    }

    pub fn info(name: impl Into<String>, value: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass: true, blocking: false, value, threshold: None, detail: detail.into() }
    }

    pub fn error(name: impl Into<String>, e: &Error) -> Self {
        Self::flag(name, false, e.to_string())
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn non_blocking(mut self) -> Self {
        self.blocking = false;
        self
    }

    pub fn ok(&self) -> bool {
        self.pass || !self.blocking
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: String,
    pub criterion: u32,
    pub pass: bool,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<SuiteCheck>) -> Self {
        let criterion = criterion_of(suite).expect("known suite");
        let pass = !checks.is_empty() && checks.iter().all(SuiteCheck::ok);
        Self { suite: suite.to_string(), criterion, pass, checks }
    }

    pub fn failures(&self) -> Vec<&SuiteCheck> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,criterion,check,pass,blocking,value,threshold,detail\n");
        for r in &self.suites {
            for c in &r.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.suite,
                    r.criterion,
                    c.name.replace(',', ";"),
                    c.pass,
                    c.blocking,
                    c.value,
                    c.threshold.map(|t| t.to_string()).unwrap_or_default(),
                    c.detail.replace(',', ";")
                );
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random lattices in the transference check.
    pub trials: u64,
    pub nbound_trials: u64,
    /// Monte-Carlo samples per dimension in the peaking check.
    pub samples: u64,
    pub budget: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 0, trials: 1000, nbound_trials: 200, samples: 1_000_000, budget: DEFAULT_BUDGET }
    }
}

/// Seed of one suite, derived from the base seed and the criterion number.
pub fn suite_seed(seed: u64, criterion: u32) -> u64 {
    seed ^ (criterion as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the named suites concurrently; the report keeps the given order.
pub fn run_verify(names: &[String], opts: &SuiteOptions) -> VerifyReport {
    let suites: Vec<SuiteReport> = names.par_iter().map(|n| run_suite(n, opts)).collect();
    VerifyReport { seed: opts.seed, pass: suites.iter().all(|s| s.pass), suites }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> SuiteReport {
    let seed = suite_seed(opts.seed, criterion_of(name).unwrap_or(0));
    let checks = match name {
        "exponents" => exponents(),
        "so-ode" => so_ode(),
        "critical" => critical(),
        "su-ode" => su_ode(),
        "rates" => rates(),
        "lattice" => lattice_suite(seed, opts),
        "cusp" => cusp(),
        "peaking" => peaking(seed, opts.samples),
        "bookkeeping" => bookkeeping(),
        other => vec![SuiteCheck::flag("known-suite", false, format!("unknown suite {other:?}"))],
    };
    SuiteReport::new(name, checks)
}

fn r64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn exponent_check(name: &str, got: Result<Rational64, Error>, expect: Rational64) -> SuiteCheck {
    match got {
        Ok(e) => SuiteCheck::flag(name, e == expect, format!("{e} vs {expect}")).with_value(r64(e)),
        Err(e) => SuiteCheck::error(name, &e),
    }
}

impl SuiteCheck {
    fn with_value(mut self, v: f64) -> Self {
        self.value = v;
        self
    }
}

fn exponents() -> Vec<SuiteCheck> {
    let mut out = vec![
        exponent_check("su-compact-n2-k1", bounds::congruence_exponent(Group::SU, 2, 1, Setting::Compact), Rational64::new(3, 4)),
        exponent_check("su-cusped-n2-k1", bounds::congruence_exponent(Group::SU, 2, 1, Setting::Cusped), Rational64::new(1, 2)),
    ];
    let (mut so_rows, mut so_bad) = (0, Vec::new());
    let (mut su_rows, mut su_bad) = (0, Vec::new());
    let mut forms_bad = Vec::new();
    for n in 2..=10i64 {
        // SO: 1 ≤ k < (n−1)/2.
        let so_ks: Vec<i64> = (1..n).filter(|k| 2 * k + 1 < n).collect();
        let core_ks: Vec<i64> = bounds::congruence_degrees(Group::SO, n as u32).map(i64::from).collect();
        if so_ks != core_ks {
            so_bad.push(format!("degrees n={n}"));
        }
        for &k in &so_ks {
            so_rows += 1;
            let expect = Rational64::new(n * (n + 1) - 4 * (n - 1 - 2 * k), n * (n + 1));
            if bounds::congruence_exponent(Group::SO, n as u32, k as u32, Setting::Cusped).ok() != Some(expect) {
                so_bad.push(format!("n={n} k={k}"));
            }
        }
        for k in 1..n {
            su_rows += 1;
            let m = (n + 1) * (n + 1) - 1;
            let expect = Rational64::new(m - 4 * (n - k), m);
            if bounds::congruence_exponent(Group::SU, n as u32, k as u32, Setting::Cusped).ok() != Some(expect) {
                su_bad.push(format!("n={n} k={k}"));
            }
            let printed = Rational64::new(n * n + 2 * k, n * n + 2 * n);
            let other = Rational64::from_integer(1) + Rational64::new(2 * k - 2 * n, n * n + 2 * n);
            let core = bounds::congruence_exponent(Group::SU, n as u32, k as u32, Setting::Compact).ok();
            if printed != other || bounds::su_compact_exponent_alt(n as u32, k as u32) != printed || core != Some(other) {
                forms_bad.push(format!("n={n} k={k}"));
            }
        }
    }
    out.push(SuiteCheck::flag("so-cusped-all", so_bad.is_empty(), format!("{so_rows} rows; mismatches: {}", so_bad.join(" "))));
    out.push(SuiteCheck::flag("su-cusped-all", su_bad.is_empty(), format!("{su_rows} rows; mismatches: {}", su_bad.join(" "))));
    out.push(SuiteCheck::flag("su-compact-forms-agree", forms_bad.is_empty(), format!("mismatches: {}", forms_bad.join(" "))));
    let table = bounds::congruence_table(10);
    let traced = table.iter().all(|r| {
        !r.formula_id.is_empty() && bounds::congruence_exponent(r.group, r.n, r.k, r.setting).ok() == Some(r.exponent)
    });
    out.push(SuiteCheck::flag("report-table", traced, format!("{} rows", table.len())));
    out
}

fn so_ode() -> Vec<SuiteCheck> {
    let systems: Vec<(u32, u32)> = so_noncritical(9).into_iter().filter(|(n, _)| n % 2 == 1).collect();
    systems
        .par_iter()
        .map(|&(n, k)| {
            let tag = format!("n={n} k={k}");
            let run = || -> Result<Vec<SuiteCheck>, Error> {
                let sys = CoeffSystem::new(Group::SO, n, k)?;
                let traj = matrix_coeff::integrate(&sys, 15.0, matrix_coeff::DEFAULT_TOL)?;
                let report = matrix_coeff::verify_asymptotics(&traj);
                let mut out: Vec<SuiteCheck> = report.checks.iter().map(|c| from_core_check(&tag, c)).collect();
                let agree = matrix_coeff::two_integrator_agreement(&traj, 1e-3, 1e-4)?;
                out.push(SuiteCheck::below(format!("{tag}: two_integrator_agreement"), agree, 1e-7));
                Ok(out)
            };
            run().unwrap_or_else(|e| vec![SuiteCheck::error(tag.clone(), &e)])
        })
        .flatten()
        .collect()
}

fn from_core_check(tag: &str, c: &matrix_coeff::Check) -> SuiteCheck {
    SuiteCheck {
        name: format!("{tag}: {}", c.name),
        pass: c.pass,
        blocking: c.blocking,
        value: c.value,
        threshold: Some(c.threshold),
        detail: String::new(),
    }
}

/// Relative change of D(R)/R between R = 10 and R = 20.
pub fn critical_dw_change(n: u32, k: u32) -> Result<(f64, f64, f64), Error> {
    let sys = CoeffSystem::new(Group::SO, n, k)?;
    let traj = matrix_coeff::integrate(&sys, 20.0, matrix_coeff::DEFAULT_TOL)?;
    let space = sys.space();
    let tf_min = traj
        .t_grid
        .iter()
        .zip(&traj.states)
        .filter(|(t, _)| (1.0..=15.0).contains(*t))
        .map(|(t, y)| t * y[0])
        .fold(f64::INFINITY, f64::min);
    let a = matrix_coeff::dw_denominator(&space, &traj, 10.0)? / 10.0;
    let b = matrix_coeff::dw_denominator(&space, &traj, 20.0)? / 20.0;
    Ok((tf_min, (b - a).abs() / a, b))
}

fn critical() -> Vec<SuiteCheck> {
    [1u32, 2, 3]
        .par_iter()
        .map(|&k| {
            let n = 2 * k + 1;
            let tag = format!("n={n} k={k}");
            match critical_dw_change(n, k) {
                Ok((tf, change, ratio)) => vec![
                    SuiteCheck::above(format!("{tag}: t_f_lower"), tf, 0.0)
                        .with_detail("min of t·f on [1,15]"),
                    SuiteCheck::below(format!("{tag}: dw_ratio_change"), change, 0.02)
                        .with_detail(format!("D(20)/20 = {ratio}")),
                ],
                Err(e) => vec![SuiteCheck::error(tag, &e)],
            }
        })
        .flatten()
        .collect()
}

fn su_ode() -> Vec<SuiteCheck> {
    (2u32..=5)
        .into_par_iter()
        .map(|n| {
            let tag = format!("n={n}");
            let run = || -> Result<Vec<SuiteCheck>, Error> {
                let sys = CoeffSystem::new(Group::SU, n, 1)?;
                let traj = matrix_coeff::integrate(&sys, 15.0, matrix_coeff::DEFAULT_TOL)?;
                let report = matrix_coeff::verify_asymptotics(&traj);
                Ok(report.checks.iter().map(|c| from_core_check(&tag, c)).collect())
            };
            run().unwrap_or_else(|e| vec![SuiteCheck::error(tag.clone(), &e)])
        })
        .flatten()
        .collect()
}

fn rates() -> Vec<SuiteCheck> {
    let mut jobs: Vec<(Group, u32, u32)> = so_noncritical(9).into_iter().map(|(n, k)| (Group::SO, n, k)).collect();
    jobs.extend((2..=5).map(|n| (Group::SU, n, 1)));
    jobs.par_iter()
        .map(|&(g, n, k)| {
            let tag = format!("{g:?} n={n} k={k}");
            match rate_row(g, n, k) {
                Ok(r) => SuiteCheck::below(format!("{tag}: log_slope_rel_error"), r.relative_error, 0.01)
                    .with_detail(format!("slope {} vs ball rate {}", r.slope, r.expected)),
                Err(e) => SuiteCheck::error(tag, &e),
            }
        })
        .collect()
}

fn random_lattice(rng: &mut ChaCha8Rng, d: usize) -> IntegerLattice {
    loop {
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.random_range(-9..=9)).collect()).collect();
        if let Ok(l) = IntegerLattice::from_integers(&rows) {
            return l;
        }
    }
}

fn lattice_suite(seed: u64, opts: &SuiteOptions) -> Vec<SuiteCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lattices: Vec<IntegerLattice> = (0..opts.trials).map(|i| random_lattice(&mut rng, 2 + (i % 4) as usize)).collect();
    let outcomes: Vec<Result<bool, Error>> = lattices
        .par_iter()
        .map(|l| lattice::successive_minima_with_budget(l, opts.budget).map(|sm| sm.transference_holds()))
        .collect();
    let failures = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
    let first_error = outcomes.iter().find_map(|o| o.as_ref().err().map(|e| e.to_string())).unwrap_or_default();
    let mut out = vec![SuiteCheck::at_most("transference_failures", failures as f64, 0.0)
        .with_detail(format!("{} lattices {}", opts.trials, first_error))];

    let trials: Vec<(IntegerLattice, u32, f64)> = (0..opts.nbound_trials)
        .map(|i| {
            let l = random_lattice(&mut rng, 2 + (i % 3) as usize);
            let nu = rng.random_range(0..=2u32);
            let u: f64 = rng.random_range(0.05..0.95);
            (l, nu, u)
        })
        .collect();
    let outcomes: Vec<Result<bool, Error>> = trials
        .par_iter()
        .map(|(l, nu, u)| {
            let sm = lattice::successive_minima_with_budget(l, opts.budget)?;
            let top = *sm.minima.last().expect("nonempty");
            let r = u * top / (*nu as f64 + 1.0).exp();
            Ok(lattice::nbound_check(l, *nu, r, l.dim() as u32 + 1, opts.budget)?.satisfied)
        })
        .collect();
    let failures = outcomes.iter().filter(|o| !matches!(o, Ok(true))).count();
    let first_error = outcomes.iter().find_map(|o| o.as_ref().err().map(|e| e.to_string())).unwrap_or_default();
    out.push(
        SuiteCheck::at_most("nbound_failures", failures as f64, 0.0)
            .with_detail(format!("{} trials {}", opts.nbound_trials, first_error)),
    );
    out
}

fn real_model(n: u32) -> CuspModel {
    CuspModel::real(n, IntegerLattice::identity(n as usize - 1)).expect("identity lattice")
}

fn cusp() -> Vec<SuiteCheck> {
    let mut out = Vec::new();
    // Zero modes: harmonic, and L² only when identically zero.
    let zero_modes: [(u32, Vec<f64>, Vec<f64>); 3] = [
        (3, vec![1.0, -0.5], vec![2.0]),
        (5, vec![0.3, 0.0, 1.0, 0.0, 0.0, -2.0], vec![1.0, 0.5, 0.0, 0.0]),
        (7, vec![1.0; 20], vec![0.25; 15]),
    ];
    for (n, a, b) in &zero_modes {
        let m = real_model(*n);
        let tag = format!("zero-mode n={n}");
        match make_zero_mode(&m, a, b).and_then(|f| harmonic_residuals(&m, &f)) {
            Ok((d, delta)) => {
                out.push(SuiteCheck::below(format!("{tag}: d_residual"), d, 1e-10));
                out.push(SuiteCheck::below(format!("{tag}: codifferential_residual"), delta, 1e-10));
            }
            Err(e) => out.push(SuiteCheck::error(tag.clone(), &e)),
        }
        let zeros_a = vec![0.0; a.len()];
        let zeros_b = vec![0.0; b.len()];
        for (label, aa, bb) in [("tangential", a, &zeros_b), ("radial", &zeros_a, b)] {
            let diverges = make_zero_mode(&m, aa, bb)
                .map(|f| matches!(slab_l2_norm(&m, &f, 0.0, f64::INFINITY), Err(Error::Divergence(_))))
                .unwrap_or(false);
            out.push(SuiteCheck::flag(format!("{tag}: {label}_not_l2"), diverges, "divergent slab norm detected"));
        }
        let vanishing = make_zero_mode(&m, &zeros_a, &zeros_b)
            .map(|f| f.is_zero() && slab_l2_norm(&m, &f, 0.0, f64::INFINITY) == Ok(0.0))
            .unwrap_or(false);
        out.push(SuiteCheck::flag(format!("{tag}: vanishing_is_l2"), vanishing, ""));
    }

    let cases: Vec<(u32, u32, Vec<i64>)> = vec![
        (5, 1, vec![1, 0, 0, 0]),
        (7, 1, vec![1, 0, 0, 0, 0, 0]),
        (7, 2, vec![1, 0, 0, 0, 0, 0]),
    ];
    let solved: Vec<Vec<SuiteCheck>> = cases
        .par_iter()
        .map(|(n, k, v)| {
            let tag = format!("mode n={n} k={k}");
            let m = real_model(*n);
            let run = || -> Result<Vec<SuiteCheck>, Error> {
                let f = solve_harmonic_mode(&m, *k, v)?;
                let mut out = Vec::new();
                for p in cusp_price_check(&m, &f, &[0.5, 1.0, 2.0])? {
                    out.push(SuiteCheck::at_least(format!("{tag}: price_margin s={}", p.s), p.margin, -1e-8));
                }
                for u in [0.0, 0.5, 1.0, 2.0] {
                    let r = verify_cusp_balance(&m, &f, u)?;
                    out.push(SuiteCheck::below(format!("{tag}: balance_residual u={u}"), r.residual, 1e-6));
                }
                let grid = f.grid();
                let mu = (0..grid.len)
                    .map(|i| slice_profile(&m, &f, grid.s(i)))
                    .filter(|p| p.mass > 0.0)
                    .map(|p| p.mu_alpha)
                    .fold(0.0, f64::max);
                out.push(SuiteCheck::below(format!("{tag}: max_mu_alpha"), mu, 0.5));
                let p = primitive_check(&m, &f, 0.5)?;
                out.push(SuiteCheck::below(format!("{tag}: primitive_residual"), p.residual, 1e-8));
                out.push(SuiteCheck::flag(
                    format!("{tag}: primitive_boundary_estimate"),
                    p.pass,
                    format!("{} ≤ {}", p.boundary, p.estimate),
                ));
                Ok(out)
            };
            run().unwrap_or_else(|e| vec![SuiteCheck::error(tag.clone(), &e)])
        })
        .collect();
    out.extend(solved.into_iter().flatten());

    let m = real_model(3);
    match solve_harmonic_mode(&m, 1, &[1, 0]) {
        Ok(f) => {
            for r0 in [0.0, 1.0, 2.0] {
                match critical_inequality(&m, &f, r0) {
                    Ok(c) => out.push(
                        SuiteCheck::at_least(format!("critical n=3 R0={r0}: margin"), c.margin, 0.0)
                            .with_detail(format!("{} ≤ {}", c.lhs, c.rhs)),
                    ),
                    Err(e) => out.push(SuiteCheck::error(format!("critical n=3 R0={r0}"), &e)),
                }
            }
        }
        Err(e) => out.push(SuiteCheck::error("critical n=3", &e)),
    }
    out
}

fn peaking(seed: u64, samples: u64) -> Vec<SuiteCheck> {
    [1u32, 3, 10, 50]
        .par_iter()
        .map(|&b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(b as u64));
            match bounds::verify_peaking_identity(b, samples, &mut rng) {
                Ok(r) => {
                    let z = if r.std_error > 0.0 { (r.mean - r.expected).abs() / r.std_error } else { 0.0 };
                    SuiteCheck::at_most(format!("b={b}: standard_errors"), z, 3.0)
                        .with_detail(format!("mean {} vs {}", r.mean, r.expected))
                }
                Err(e) => SuiteCheck::error(format!("b={b}"), &e),
            }
        })
        .collect()
}

fn one_form(model: &CuspModel) -> Result<CuspForm, Error> {
    let mut f = CuspForm::new(model, 0, Grid::standard())?;
    let zero = vec![0; model.cross_dim()];
    f.add_term(model, &zero, 0, Coeff::ClosedForm(ExpSum::constant(Complex64::new(1.0, 0.0))))?;
    Ok(f)
}

fn bookkeeping() -> Vec<SuiteCheck> {
    let mut out = Vec::new();
    let nu0 = bounds::nu_threshold(0);
    out.push(SuiteCheck::below("nu_threshold_0", (nu0 - 3.0 / (PI * PI)).abs(), 1e-12).with_detail(format!("{nu0}")));

    let space = RankOneSpace { kind: Kind::R, n: 3 };
    let oracle = 1.0 / (PI * (2f64.sinh() - 2.0));
    match bounds::cusp_count_bound(&space, 2.0, 1.0) {
        Ok(c) => out.push(SuiteCheck::below("cusp_count_ratio", (c.ratio - oracle).abs() / oracle, 1e-10)
            .with_detail(format!("{} vs {oracle}", c.ratio))),
        Err(e) => out.push(SuiteCheck::error("cusp_count_ratio", &e)),
    }

    for (n, diag) in [(3u32, vec![2i64, 3]), (4, vec![1, 1, 1]), (5, vec![1, 2, 3, 5])] {
        let rows: Vec<Vec<i64>> =
            (0..diag.len()).map(|i| (0..diag.len()).map(|j| if i == j { diag[i] } else { 0 }).collect()).collect();
        let tag = format!("cusp_volume_scaling n={n}");
        let run = || -> Result<f64, Error> {
            let m = CuspModel::real(n, IntegerLattice::from_integers(&rows)?)?;
            let one = one_form(&m)?;
            let v0 = slab_l2_norm(&m, &one, 0.0, f64::INFINITY)?;
            let mut worst: f64 = 0.0;
            for k in [0.5, 1.0, 2.0, 3.0] {
                let vk = slab_l2_norm(&m, &one, k, f64::INFINITY)?;
                let expect = (-k * (n as f64 - 1.0)).exp() * v0;
                worst = worst.max((vk - expect).abs() / expect);
            }
            Ok(worst)
        };
        match run() {
            Ok(w) => out.push(SuiteCheck::below(tag, w, 1e-10)),
            Err(e) => out.push(SuiteCheck::error(tag, &e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_resolve() {
        for (i, (name, c)) in SUITES.iter().enumerate() {
            assert_eq!(criterion_of(name), Some(*c));
            assert_eq!(*c as usize, i + 1);
        }
        assert_eq!(criterion_of("nope"), None);
    }

    #[test]
    fn suite_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (1..=9).map(|c| suite_seed(7, c)).collect();
        assert_eq!(seeds.len(), 9);
    }

    #[test]
    fn non_blocking_checks_never_fail_a_suite() {
        let r = SuiteReport::new("exponents", vec![SuiteCheck::at_most("x", 2.0, 1.0).non_blocking()]);
        assert!(r.pass);
        let r = SuiteReport::new("exponents", vec![SuiteCheck::at_most("x", 2.0, 1.0)]);
        assert!(!r.pass);
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn bookkeeping_passes() {
        let checks = bookkeeping();
        assert!(checks.iter().all(SuiteCheck::ok), "{checks:?}");
    }

    #[test]
    fn exponents_pass() {
        let checks = exponents();
        assert!(checks.iter().all(SuiteCheck::ok), "{checks:?}");
    }
}
