//! One function per command; each validates its parameters, computes, and
//! renders the requested format.

use crate::config::{Command, Format, Params, RunConfig};
use crate::suites::{self, SuiteOptions};
use crate::{CliError, EXIT_NUMERIC, EXIT_OK};
use pricebench_core::bounds::{self, BoundInputs, Setting};
use pricebench_core::cusp_forms::{
    cusp_price_check, critical_inequality, primitive_check, slice_profile, solve_harmonic_mode_with_info,
    verify_cusp_balance, CuspModel,
};
use pricebench_core::geometry::{self, Kind, RankOneSpace};
use pricebench_core::lattice::{self, IntegerLattice, DEFAULT_BUDGET};
use pricebench_core::matrix_coeff::{self, CoeffSystem, Group};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;

/// Rendered outputs of a run. `extras` are written beside the primary file
/// under `<stem>.<suffix>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub primary: String,
    pub extras: Vec<(String, String)>,
    pub status: i32,
}

impl Artifacts {
    fn ok(primary: String) -> Self {
        Self { primary, extras: Vec::new(), status: EXIT_OK }
    }
}

type Res<T> = Result<T, CliError>;

pub fn run(config: &RunConfig) -> Res<Artifacts> {
    match config.command {
        Command::Geometry => geometry_cmd(config),
        Command::Bounds => bounds_cmd(config),
        Command::Ode => ode_cmd(config),
        Command::Lattice => lattice_cmd(config),
        Command::Cusp => cusp_cmd(config),
        Command::Report => report_cmd(config),
        Command::Verify => verify_cmd(config),
    }
}

fn required<T: Clone>(v: &Option<T>, key: &str) -> Res<T> {
    v.clone().ok_or_else(|| CliError::config(key, "required parameter is missing".into()))
}

fn positive(v: Option<f64>, key: &str, default: Option<f64>) -> Res<f64> {
    let x = match v.or(default) {
        Some(x) => x,
        None => return Err(CliError::config(key, "required parameter is missing".into())),
    };
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(key, format!("must be positive and finite, got {x}")))
    }
}

fn parse_space(p: &Params) -> Res<RankOneSpace> {
    let kind: Kind = required(&p.space, "space")?.parse().map_err(|e| CliError::from_core("space", e))?;
    let n = required(&p.n, "n")?;
    RankOneSpace::new(kind, n).map_err(|e| CliError::from_core("n", e))
}

fn parse_group(p: &Params) -> Res<Group> {
    required(&p.group, "group")?.parse().map_err(|e| CliError::from_core("group", e))
}

fn format_or(config: &RunConfig, default: Format) -> Format {
    config.output.format.unwrap_or(default)
}

fn no_plot(command: &str) -> CliError {
    CliError::config("format", format!("plot output is not available for {command}"))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn plot(points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (x, y) in points {
        let _ = writeln!(s, "{x} {y}");
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

// geometry

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct GeometryRow {
    r: f64,
    lambda1: f64,
    lambda2: f64,
    multiplicity1: u32,
    multiplicity2: u32,
    mean_curvature: f64,
    ball_volume: f64,
    gap: Option<f64>,
}

fn radii(p: &Params) -> Res<Vec<f64>> {
    let lo = positive(p.r_min, "r-min", Some(0.1))?;
    let hi = positive(p.r_max, "r-max", Some(5.0))?;
    if hi < lo {
        return Err(CliError::config("r-max", format!("must be at least r-min = {lo}, got {hi}")));
    }
    let steps = p.steps.unwrap_or(50);
    if steps == 0 {
        return Err(CliError::config("steps", "must be at least 1".into()));
    }
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

fn geometry_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let space = parse_space(p)?;
    let rs = radii(p)?;
    let qbound = match p.k {
        Some(k) => Some(geometry::q_lower_bound(&space, k).map_err(|e| CliError::from_core("k", e))?),
        None => None,
    };
    let rows = rs
        .par_iter()
        .map(|&r| {
            let shape = geometry::sphere_shape(&space, r).map_err(|e| CliError::from_core("r-min", e))?;
            let gap = match p.k {
                Some(k) => Some(geometry::eigenvalue_gap(&space, k, r).map_err(|e| CliError::from_core("k", e))?),
                None => None,
            };
            Ok(GeometryRow {
                r,
                lambda1: shape.lambda1,
                lambda2: shape.lambda2,
                multiplicity1: shape.multiplicity1,
                multiplicity2: shape.multiplicity2,
                mean_curvature: shape.mean_curvature,
                ball_volume: geometry::ball_volume(&space, r).map_err(|e| CliError::from_core("r-max", e))?,
                gap,
            })
        })
        .collect::<Res<Vec<_>>>()?;
    let primary = match format_or(config, Format::Csv) {
        Format::Csv => {
            let mut s = String::from("r,lambda1,lambda2,multiplicity1,multiplicity2,meanCurvature,ballVolume,gap\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.r, r.lambda1, r.lambda2, r.multiplicity1, r.multiplicity2, r.mean_curvature, r.ball_volume, opt(r.gap)
                );
            }
            s
        }
        Format::Json => to_json(&json!({ "space": space.to_string(), "k": p.k, "qBound": qbound, "rows": rows })),
        Format::Plot => plot(rows.iter().map(|r| (r.r, r.gap.unwrap_or(r.lambda1)))),
    };
    Ok(Artifacts::ok(primary))
}

// bounds

fn bounds_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let space = parse_space(p)?;
    let k = required(&p.k, "k")?;
    let vol = positive(p.vol, "vol", None)?;
    let v_min = positive(p.v_min, "v-min", None)?;
    let inj = positive(p.inj, "inj", None)?;
    if v_min > vol {
        return Err(CliError::config("v-min", format!("exceeds vol = {vol}")));
    }
    let setting: Setting = match &p.setting {
        Some(s) => s.parse().map_err(|e| CliError::from_core("setting", e))?,
        None => Setting::Compact,
    };
    let mut inputs = BoundInputs::new(space, k, vol, v_min, inj);
    inputs.cusp_vols = p.cusp_vols.clone().unwrap_or_default();
    inputs.cusp_lattice_deltas = p.deltas.clone().unwrap_or_default();
    inputs.v_min_cusps = p.v_min_cusps;
    for (key, xs) in [("cusp-vols", &inputs.cusp_vols), ("deltas", &inputs.cusp_lattice_deltas)] {
        for &x in xs {
            positive(Some(x), key, None)?;
        }
    }
    if let Some(x) = inputs.v_min_cusps {
        positive(Some(x), "v-min-cusps", None)?;
    } else if !inputs.cusp_vols.is_empty() {
        return Err(CliError::config("v-min-cusps", "required when cusp-vols is given".into()));
    }
    let report = match setting {
        Setting::Compact => bounds::compact_bound(&inputs),
        Setting::Cusped => bounds::cusped_l2_bound(&inputs),
    }
    .map_err(|e| CliError::from_core("k", e))?;
    let primary = match format_or(config, Format::Json) {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => {
            let mut s = String::from("formulaId,input,exponent,constantPolicy,value\n");
            for (name, e) in &report.exponents {
                let _ = writeln!(s, "{},{},{},{},{}", report.formula_id, name, e, report.constant_policy, report.value);
            }
            s
        }
        Format::Plot => return Err(no_plot("bounds")),
    };
    Ok(Artifacts::ok(primary))
}

// ode

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct OdeSummary {
    system: CoeffSystem,
    t_end: f64,
    tol: f64,
    passed: bool,
    checks: Vec<matrix_coeff::Check>,
    integrator_agreement: f64,
    dw_log_slope: Option<f64>,
}

fn slope_radii(t_end: f64) -> Vec<f64> {
    let lo = (t_end - 5.0).max(1.0);
    (0..=10).map(|i| lo + (t_end - lo) * i as f64 / 10.0).collect()
}

fn ode_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let group = parse_group(p)?;
    let n = required(&p.n, "n")?;
    let sys = CoeffSystem::new(group, n, p.k.unwrap_or(1)).map_err(|e| CliError::from_core("k", e))?;
    let t_end = positive(p.t_end, "t-end", Some(15.0))?;
    if t_end <= 1.0 {
        return Err(CliError::config("t-end", format!("must exceed 1, got {t_end}")));
    }
    let tol = positive(p.tol, "tol", Some(matrix_coeff::DEFAULT_TOL))?;
    let traj = matrix_coeff::integrate(&sys, t_end, tol).map_err(|e| CliError::from_core("tol", e))?;
    let report = matrix_coeff::verify_asymptotics(&traj);
    let agreement = matrix_coeff::two_integrator_agreement(&traj, 1e-3, 1e-4).map_err(|e| CliError::from_core("tol", e))?;
    let slope = if t_end >= 2.0 {
        Some(matrix_coeff::log_slope(&sys.space(), &traj, &slope_radii(t_end)).map_err(|e| CliError::from_core("t-end", e))?)
    } else {
        None
    };
    let summary = OdeSummary {
        system: sys,
        t_end,
        tol,
        passed: report.passed() && agreement < 1e-7,
        checks: report.checks,
        integrator_agreement: agreement,
        dw_log_slope: slope,
    };
    let status = if summary.passed { EXIT_OK } else { EXIT_NUMERIC };
    let (primary, extras) = match format_or(config, Format::Csv) {
        Format::Csv => (traj.to_csv(), vec![("asymptotics.json".to_string(), to_json(&summary))]),
        Format::Json => (to_json(&json!({ "trajectory": traj, "asymptotics": summary })), Vec::new()),
        Format::Plot => (plot(traj.t_grid.iter().zip(&traj.states).map(|(t, y)| (*t, y[0]))), Vec::new()),
    };
    Ok(Artifacts { primary, extras, status })
}

// lattice

fn parse_basis(text: &str) -> Res<IntegerLattice> {
    let path = std::path::Path::new(text);
    let body = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::config("basis", format!("cannot read {text}: {e}")))?
    } else {
        text.replace(';', "\n")
    };
    IntegerLattice::parse(&body).map_err(|e| CliError::from_core("basis", e))
}

fn lattice_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let l = parse_basis(&required(&p.basis, "basis")?)?;
    let budget = p.budget.unwrap_or(DEFAULT_BUDGET);
    let sm = lattice::successive_minima_with_budget(&l, budget).map_err(|e| CliError::from_core("budget", e))?;
    let dual = lattice::dual_lattice(&l).map_err(|e| CliError::from_core("basis", e))?;
    let count = match p.radius {
        Some(r) => {
            let r = positive(Some(r), "radius", None)?;
            Some(lattice::count_points_in_ball(&l, r, budget).map_err(|e| CliError::from_core("budget", e))?)
        }
        None => None,
    };
    let nbound = match (p.nu, p.radius) {
        (Some(nu), Some(r)) => {
            let ambient = p.n.unwrap_or(l.dim() as u32 + 1);
            let rep = lattice::nbound_check(&l, nu, r, ambient, budget).map_err(|e| match e {
                pricebench_core::Error::HypothesisFailed(_) => CliError::from_core("radius", e),
                e => CliError::from_core("budget", e),
            })?;
            Some(json!({ "nu": nu, "radius": rep.radius, "count": rep.count, "bound": rep.bound, "satisfied": rep.satisfied }))
        }
        _ => None,
    };
    let primary = match format_or(config, Format::Json) {
        Format::Json => to_json(&json!({
            "dim": l.dim(),
            "basis": l.to_text(),
            "covolume": lattice::format_rational(&l.covolume()),
            "minima": sm.minima,
            "minimaSquared": sm.minima_sq.iter().map(lattice::format_rational).collect::<Vec<_>>(),
            "witnesses": sm.witnesses,
            "delta": sm.delta,
            "deltaSquared": lattice::format_rational(&sm.delta_sq),
            "transference": sm.transference_holds(),
            "dual": dual.to_text(),
            "count": count,
            "nbound": nbound,
        })),
        Format::Csv => {
            let mut s = String::from("i,minimum,minimumSquared,witness\n");
            for (i, (m, w)) in sm.minima.iter().zip(&sm.witnesses).enumerate() {
                let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{},{},{},{}", i + 1, m, lattice::format_rational(&sm.minima_sq[i]), w.join(" "));
            }
            s
        }
        Format::Plot => plot(sm.minima.iter().enumerate().map(|(i, m)| ((i + 1) as f64, *m))),
    };
    Ok(Artifacts::ok(primary))
}

// cusp

fn cusp_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    if let Some(s) = &p.space {
        if s.parse::<Kind>().map_err(|e| CliError::from_core("space", e))? != Kind::R {
            return Err(CliError::config("space", "harmonic mode solver works on real cusps only".into()));
        }
    }
    let n = required(&p.n, "n")?;
    if n < 3 {
        return Err(CliError::config("n", format!("real cusp model needs n ≥ 3, got {n}")));
    }
    let k = p.k.unwrap_or(1);
    let l = match &p.basis {
        Some(b) => parse_basis(b)?,
        None => IntegerLattice::identity(n as usize - 1),
    };
    let model = CuspModel::real(n, l).map_err(|e| CliError::from_core("basis", e))?;
    let v = required(&p.v, "v")?;
    let heights = p.heights.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    for &h in &heights {
        if !(h >= 0.0 && h.is_finite()) {
            return Err(CliError::config("heights", format!("heights must be finite and ≥ 0, got {h}")));
        }
    }
    let (f, info) = solve_harmonic_mode_with_info(&model, k, &v).map_err(|e| match e {
        pricebench_core::Error::Domain(_) => CliError::from_core("v", e),
        e => CliError::from_core("k", e),
    })?;
    let num = |e| CliError::from_core("heights", e);
    let balance = heights.iter().map(|&u| verify_cusp_balance(&model, &f, u).map_err(num)).collect::<Res<Vec<_>>>()?;
    let critical_degree = 2 * k + 1 == n;
    let price = if critical_degree { Vec::new() } else { cusp_price_check(&model, &f, &heights).map_err(num)? };
    let primitive = heights.iter().map(|&r| primitive_check(&model, &f, r).map_err(num)).collect::<Res<Vec<_>>>()?;
    let critical = if critical_degree {
        heights.iter().map(|&r| critical_inequality(&model, &f, r).map_err(num)).collect::<Res<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let grid = f.grid();
    let stride = (grid.len / 200).max(1);
    let profile: Vec<_> = (0..grid.len).step_by(stride).map(|i| slice_profile(&model, &f, grid.s(i))).collect();
    let mu_ok = profile.iter().all(|q| q.mass == 0.0 || q.mu_alpha < 0.5);
    let passed = balance.iter().all(|b| b.residual < 1e-6 && b.monotone)
        && price.iter().all(|c| c.pass)
        && primitive.iter().all(|c| c.pass)
        && critical.iter().all(|c| c.pass)
        && mu_ok;
    let summary = json!({
        "n": n,
        "k": k,
        "v": v,
        "solver": {
            "kappa": info.kappa, "sMax": info.s_max, "intervals": info.intervals,
            "dResidual": info.d_residual, "deltaResidual": info.delta_residual, "steps": info.steps,
        },
        "passed": passed,
        "balance": balance.iter().map(|b| json!({
            "u": b.u, "boundary": b.boundary, "bulk": b.bulk, "residual": b.residual,
            "monotone": b.monotone, "muAlpha": b.profile.mu_alpha,
        })).collect::<Vec<_>>(),
        "price": price,
        "primitive": primitive,
        "critical": critical,
        "muBelowHalf": mu_ok,
    });
    let status = if passed { EXIT_OK } else { EXIT_NUMERIC };
    let (primary, extras) = match format_or(config, Format::Json) {
        Format::Json => (to_json(&json!({ "summary": summary, "profile": profile })), Vec::new()),
        Format::Csv => {
            let mut s = String::from("s,mass,muAlpha\n");
            for q in &profile {
                let _ = writeln!(s, "{},{},{}", q.s, q.mass, q.mu_alpha);
            }
            (s, vec![("summary.json".to_string(), to_json(&summary))])
        }
        Format::Plot => (plot(profile.iter().map(|q| (q.s, q.mass))), Vec::new()),
    };
    Ok(Artifacts { primary, extras, status })
}

// report

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RateRow {
    pub group: Group,
    pub n: u32,
    pub k: u32,
    pub slope: f64,
    pub expected: f64,
    pub relative_error: f64,
    pub formula_id: String,
}

/// SO systems below the critical degree for n in 3..=n_max.
pub fn so_noncritical(n_max: u32) -> Vec<(u32, u32)> {
    (3..=n_max).flat_map(|n| (1..).take_while(move |k| 2 * k + 1 < n).map(move |k| (n, k))).collect()
}

/// Least-squares growth rate of the denominator on R ∈ [10, 15] against the ball decay rate.
pub fn rate_row(group: Group, n: u32, k: u32) -> Result<RateRow, pricebench_core::Error> {
    let sys = CoeffSystem::new(group, n, k)?;
    let traj = matrix_coeff::integrate(&sys, 15.0, matrix_coeff::DEFAULT_TOL)?;
    let slope = matrix_coeff::log_slope(&sys.space(), &traj, &slope_radii(15.0))?;
    let expected = pricebench_core::price::ball_decay(&sys.space(), k)?.rate_f64();
    let tag = format!("{group:?}").to_lowercase();
    Ok(RateRow {
        group,
        n,
        k,
        slope,
        expected,
        relative_error: (slope - expected).abs() / expected,
        formula_id: format!("dw-log-slope-{tag}"),
    })
}

fn report_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let n_max = p.n_max.unwrap_or(10);
    if !(2..=40).contains(&n_max) {
        return Err(CliError::config("n-max", format!("must lie in 2..=40, got {n_max}")));
    }
    let group = match &p.group {
        Some(_) => Some(parse_group(p)?),
        None => None,
    };
    let setting: Option<Setting> = match &p.setting {
        Some(s) => Some(s.parse().map_err(|e| CliError::from_core("setting", e))?),
        None => None,
    };
    let rows: Vec<_> = bounds::congruence_table(n_max)
        .into_iter()
        .filter(|r| group.is_none_or(|g| g == r.group) && setting.is_none_or(|s| s == r.setting))
        .collect();
    let mut jobs: Vec<(Group, u32, u32)> = Vec::new();
    if setting.is_none() {
        if group.is_none_or(|g| g == Group::SO) {
            jobs.extend(so_noncritical(n_max).into_iter().map(|(n, k)| (Group::SO, n, k)));
        }
        if group.is_none_or(|g| g == Group::SU) {
            jobs.extend((2..=n_max).map(|n| (Group::SU, n, 1)));
        }
    }
    let rates = jobs
        .par_iter()
        .map(|&(g, n, k)| rate_row(g, n, k).map_err(|e| CliError::from_core("n-max", e)))
        .collect::<Res<Vec<_>>>()?;
    let primary = match format_or(config, Format::Csv) {
        Format::Csv => {
            let mut s = String::from("section,group,setting,n,k,value,expected,formulaId\n");
            for r in &rows {
                let setting = format!("{:?}", r.setting).to_lowercase();
                let _ = writeln!(s, "congruence,{:?},{},{},{},{},,{}", r.group, setting, r.n, r.k, r.exponent, r.formula_id);
            }
            for r in &rates {
                let _ = writeln!(s, "ode-rate,{:?},,{},{},{},{},{}", r.group, r.n, r.k, r.slope, r.expected, r.formula_id);
            }
            s
        }
        Format::Json => to_json(&json!({ "congruence": rows, "odeRates": rates })),
        Format::Plot => return Err(no_plot("report")),
    };
    Ok(Artifacts::ok(primary))
}

// verify

fn verify_cmd(config: &RunConfig) -> Res<Artifacts> {
    let p = &config.params;
    let names: Vec<String> = match &p.suite {
        None => suites::SUITES.iter().map(|s| s.0.to_string()).collect(),
        Some(s) if s == "all" => suites::SUITES.iter().map(|s| s.0.to_string()).collect(),
        Some(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
    };
    for name in &names {
        if suites::criterion_of(name).is_none() {
            let known: Vec<&str> = suites::SUITES.iter().map(|s| s.0).collect();
            return Err(CliError::config("suite", format!("unknown suite {name:?}; known: {}", known.join(", "))));
        }
    }
    let mut opts = SuiteOptions { seed: p.seed.unwrap_or(0), ..SuiteOptions::default() };
    if let Some(t) = p.trials {
        if t == 0 {
            return Err(CliError::config("trials", "must be at least 1".into()));
        }
        opts.trials = t;
    }
    if let Some(s) = p.samples {
        if s < 2 {
            return Err(CliError::config("samples", "must be at least 2".into()));
        }
        opts.samples = s;
    }
    if let Some(b) = p.budget {
        opts.budget = b;
    }
    let report = suites::run_verify(&names, &opts);
    let status = if report.pass { EXIT_OK } else { EXIT_NUMERIC };
    let primary = match format_or(config, Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
        Format::Plot => return Err(no_plot("verify")),
    };
    Ok(Artifacts { primary, extras: Vec::new(), status })
}
