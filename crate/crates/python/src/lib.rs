//! Python module `pricebench`: geometry, decay rates, lattices, matrix
//! coefficients, bounds, cusp modes and the verification suites.

use pricebench_cli::suites::{run_verify, SuiteOptions, SUITES};
use pricebench_cli::{FileConfig, OutputSpec, Params, RunConfig};
use pricebench_core::bounds::{self, BoundInputs, Setting};
use pricebench_core::cusp_forms::{
    cusp_price_check, slab_l2_norm, solve_harmonic_mode_with_info, verify_cusp_balance, CuspModel,
};
use pricebench_core::geometry::{self, Kind, RankOneSpace};
use pricebench_core::lattice::{self, IntegerLattice, DEFAULT_BUDGET};
use pricebench_core::matrix_coeff::{self, CoeffSystem, Group};
use pricebench_core::price::{self, CuspKind};
use pricebench_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    if e.is_numeric() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Serializable value → Python object through JSON.
fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PyModule::import(py, "json")?.getattr("loads")?.call1((text,))?.unbind())
}

fn space(kind: &str, n: u32) -> PyResult<RankOneSpace> {
    let kind: Kind = kind.parse().map_err(err)?;
    RankOneSpace::new(kind, n).map_err(err)
}

/// Shape operator of the geodesic sphere of radius r.
#[pyfunction]
fn sphere_shape(py: Python<'_>, kind: &str, n: u32, r: f64) -> PyResult<PyObject> {
    to_py(py, &geometry::sphere_shape(&space(kind, n)?, r).map_err(err)?)
}

#[pyfunction]
fn eigenvalue_gap(kind: &str, n: u32, k: u32, r: f64) -> PyResult<f64> {
    geometry::eigenvalue_gap(&space(kind, n)?, k, r).map_err(err)
}

#[pyfunction]
fn ball_volume(kind: &str, n: u32, r: f64) -> PyResult<f64> {
    geometry::ball_volume(&space(kind, n)?, r).map_err(err)
}

/// Per-radius ball decay: rate as an exact "p/q" string plus its float value.
#[pyfunction]
fn ball_decay_rate(kind: &str, n: u32, k: u32) -> PyResult<(String, f64)> {
    let d = price::ball_decay(&space(kind, n)?, k).map_err(err)?;
    Ok((d.rate.to_string(), d.rate_f64()))
}

/// (factor, constant) of the cusp decay at height s.
#[pyfunction]
fn cusp_decay(kind: &str, n: u32, k: u32, s: f64) -> PyResult<(f64, f64)> {
    let kind: CuspKind = kind.parse().map_err(err)?;
    price::cusp_decay(kind, n, k, s).map_err(err)
}

#[pyfunction]
fn congruence_exponent(group: &str, n: u32, k: u32, setting: &str) -> PyResult<String> {
    let group: Group = group.parse().map_err(err)?;
    let setting: Setting = setting.parse().map_err(err)?;
    Ok(bounds::congruence_exponent(group, n, k, setting).map_err(err)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (n_max = 10))]
fn congruence_table(py: Python<'_>, n_max: u32) -> PyResult<PyObject> {
    to_py(py, &bounds::congruence_table(n_max))
}

/// Betti-number bound; setting "compact" or "cusped".
#[pyfunction]
#[pyo3(signature = (kind, n, k, vol, v_min, inj, setting = "compact", cusp_vols = Vec::new(), v_min_cusps = None))]
#[allow(clippy::too_many_arguments)]
fn bound(
    py: Python<'_>,
    kind: &str,
    n: u32,
    k: u32,
    vol: f64,
    v_min: f64,
    inj: f64,
    setting: &str,
    cusp_vols: Vec<f64>,
    v_min_cusps: Option<f64>,
) -> PyResult<PyObject> {
    let mut inputs = BoundInputs::new(space(kind, n)?, k, vol, v_min, inj);
    inputs.cusp_vols = cusp_vols;
    inputs.v_min_cusps = v_min_cusps;
    let report = match setting.parse().map_err(err)? {
        Setting::Compact => bounds::compact_bound(&inputs),
        Setting::Cusped => bounds::cusped_l2_bound(&inputs),
    }
    .map_err(err)?;
    to_py(py, &report)
}

/// Full-rank lattice with exact rational basis.
#[pyclass(name = "Lattice", module = "pricebench")]
#[derive(Clone)]
struct PyLattice {
    inner: IntegerLattice,
}

#[pymethods]
impl PyLattice {
    /// Integer basis rows.
    #[new]
    fn new(rows: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(Self { inner: IntegerLattice::from_integers(&rows).map_err(err)? })
    }

    /// Rows of rationals "p/q" or integers, one basis vector per line.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: IntegerLattice::parse(text).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn covolume(&self) -> String {
        lattice::format_rational(&self.inner.covolume())
    }

    fn dual(&self) -> PyResult<Self> {
        Ok(Self { inner: lattice::dual_lattice(&self.inner).map_err(err)? })
    }

    /// Minima, exact squared minima, witnesses, δ and the transference flag.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn successive_minima(&self, py: Python<'_>, budget: u64) -> PyResult<PyObject> {
        let sm = lattice::successive_minima_with_budget(&self.inner, budget).map_err(err)?;
        #[derive(Serialize)]
        struct Out {
            minima: Vec<f64>,
            minima_sq: Vec<String>,
            witnesses: Vec<Vec<i64>>,
            delta: f64,
            delta_sq: String,
            transference: bool,
        }
        to_py(
            py,
            &Out {
                minima: sm.minima.clone(),
                minima_sq: sm.minima_sq.iter().map(lattice::format_rational).collect(),
                witnesses: sm.witnesses.clone(),
                delta: sm.delta,
                delta_sq: lattice::format_rational(&sm.delta_sq),
                transference: sm.transference_holds(),
            },
        )
    }

    #[pyo3(signature = (r, budget = DEFAULT_BUDGET))]
    fn count_points(&self, r: f64, budget: u64) -> PyResult<u64> {
        lattice::count_points_in_ball(&self.inner, r, budget).map_err(err)
    }

    /// (count, bound, satisfied) of the packing bound in ambient dimension dim + 1.
    #[pyo3(signature = (nu, r, budget = DEFAULT_BUDGET))]
    fn nbound(&self, nu: u32, r: f64, budget: u64) -> PyResult<(u64, f64, bool)> {
        let rep = lattice::nbound_check(&self.inner, nu, r, self.inner.dim() as u32 + 1, budget).map_err(err)?;
        Ok((rep.count, rep.bound, rep.satisfied))
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?})", self.inner.to_text())
    }
}

/// Matrix-coefficient trajectory and its asymptotics report.
#[pyfunction]
#[pyo3(signature = (group, n, k = 1, t_end = 15.0, tol = matrix_coeff::DEFAULT_TOL))]
fn matrix_coefficient(py: Python<'_>, group: &str, n: u32, k: u32, t_end: f64, tol: f64) -> PyResult<PyObject> {
    let sys = CoeffSystem::new(group.parse().map_err(err)?, n, k).map_err(err)?;
    let traj = matrix_coeff::integrate(&sys, t_end, tol).map_err(err)?;
    let report = matrix_coeff::verify_asymptotics(&traj);
    #[derive(Serialize)]
    struct Out<'a> {
        t: &'a [f64],
        states: &'a [[f64; 2]],
        denominators: &'a [f64],
        passed: bool,
        checks: &'a [matrix_coeff::Check],
    }
    to_py(
        py,
        &Out {
            t: &traj.t_grid,
            states: &traj.states,
            denominators: &traj.denominators,
            passed: report.passed(),
            checks: &report.checks,
        },
    )
}

/// Solves one Fourier mode on the real cusp over Z^{n−1} and reports the
/// balance residuals, Price margins and total L² mass.
#[pyfunction]
#[pyo3(signature = (n, k, v, heights = vec![0.5, 1.0, 2.0]))]
fn cusp_mode(py: Python<'_>, n: u32, k: u32, v: Vec<i64>, heights: Vec<f64>) -> PyResult<PyObject> {
    let model = CuspModel::real(n, IntegerLattice::identity(n.saturating_sub(1) as usize)).map_err(err)?;
    let (f, info) = solve_harmonic_mode_with_info(&model, k, &v).map_err(err)?;
    let residuals = heights
        .iter()
        .map(|&u| verify_cusp_balance(&model, &f, u).map(|r| r.residual))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let margins: Vec<f64> = if 2 * k + 1 == n {
        Vec::new()
    } else {
        cusp_price_check(&model, &f, &heights).map_err(err)?.iter().map(|c| c.margin).collect()
    };
    #[derive(Serialize)]
    struct Out {
        kappa: f64,
        d_residual: f64,
        delta_residual: f64,
        heights: Vec<f64>,
        balance_residuals: Vec<f64>,
        price_margins: Vec<f64>,
        l2_mass: f64,
    }
    let l2_mass = slab_l2_norm(&model, &f, 0.0, f64::INFINITY).map_err(err)?;
    to_py(
        py,
        &Out {
            kappa: info.kappa,
            d_residual: info.d_residual,
            delta_residual: info.delta_residual,
            heights,
            balance_residuals: residuals,
            price_margins: margins,
            l2_mass,
        },
    )
}

/// Runs verification suites (all by default) and returns the report.
#[pyfunction]
#[pyo3(signature = (suites = None, seed = 0, trials = 1000, samples = 1_000_000))]
fn verify(py: Python<'_>, suites: Option<Vec<String>>, seed: u64, trials: u64, samples: u64) -> PyResult<PyObject> {
    let names = suites.unwrap_or_else(|| SUITES.iter().map(|s| s.0.to_string()).collect());
    if let Some(bad) = names.iter().find(|n| pricebench_cli::suites::criterion_of(n).is_none()) {
        return Err(PyValueError::new_err(format!("unknown suite {bad:?}")));
    }
    let opts = SuiteOptions { seed, trials, samples, ..SuiteOptions::default() };
    let report = py.allow_threads(|| run_verify(&names, &opts));
    to_py(py, &report)
}

/// Runs a TOML run configuration; returns (exit status, primary output).
#[pyfunction]
fn run_config(py: Python<'_>, toml_text: &str) -> PyResult<(i32, String)> {
    let file = FileConfig::parse(toml_text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let cfg = RunConfig::merge(Some(file), None, Params::default(), OutputSpec::default())
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    match py.allow_threads(|| pricebench_cli::run(&cfg)) {
        Ok(a) => Ok((a.status, a.primary)),
        Err(e) => Ok((e.code, e.to_string())),
    }
}

#[pymodule]
fn pricebench(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(sphere_shape, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue_gap, m)?)?;
    m.add_function(wrap_pyfunction!(ball_volume, m)?)?;
    m.add_function(wrap_pyfunction!(ball_decay_rate, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_decay, m)?)?;
    m.add_function(wrap_pyfunction!(congruence_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(congruence_table, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_mode, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
