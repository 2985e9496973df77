//! Python bindings for `qfridge`.
//!
//! Structured results come back as plain dicts and lists; cycle kinds are
//! passed as strings (`"otto"`, `"swap"`, `"mo1"`, `"mo2"`, `"ms1"`, `"ms2"`).

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde::Serialize;
use serde_json::Value;

use qfridge::analysis::{self, FigureDataset};
use qfridge::channel::{self, MeasurementChannel};
use qfridge::cli::verify::{run_verification, Fault};
use qfridge::qstate::{gibbs_state, Complex64, QubitHamiltonian};
use qfridge::simulate::{compare_ledgers, run_cycle, ORACLE_TOL};
use qfridge::{analytic, CycleKind, Error};

create_exception!(
    pyqfridge,
    RegimeError,
    PyValueError,
    "Parameters outside the refrigeration regime."
);
create_exception!(
    pyqfridge,
    VerificationError,
    PyRuntimeError,
    "Simulator and closed form disagree."
);

fn to_py_err(e: Error) -> PyErr {
    match e {
        e if e.is_regime() => RegimeError::new_err(e.to_string()),
        Error::Consistency(_) | Error::Structural(_) => VerificationError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_bound_py_any(py)?,
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py)?,
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py)?,
        },
        Value::String(s) => s.into_bound_py_any(py)?,
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn kind(name: &str) -> PyResult<CycleKind> {
    name.parse().map_err(to_py_err)
}

/// Cycle parameters: frequencies, inverse temperatures and measurement strength.
#[pyclass(name = "CycleParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCycleParams {
    inner: qfridge::CycleParams,
}

#[pymethods]
impl PyCycleParams {
    #[new]
    #[pyo3(signature = (omega_c, omega_h, beta_c, beta_h, xi = 0.0))]
    fn new(omega_c: f64, omega_h: f64, beta_c: f64, beta_h: f64, xi: f64) -> PyResult<Self> {
        qfridge::CycleParams::new(omega_c, omega_h, beta_c, beta_h, xi)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// Parameters of the first figure preset at strength `xi`.
    #[staticmethod]
    #[pyo3(signature = (xi = 0.0))]
    fn preset(xi: f64) -> PyResult<Self> {
        Self::new(
            analysis::FIG_OMEGA_C,
            analysis::FIG_OMEGA_H,
            analysis::FIG_BETA_C,
            analysis::FIG_BETA_H[0],
            xi,
        )
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c
    }
    #[getter]
    fn omega_h(&self) -> f64 {
        self.inner.omega_h
    }
    #[getter]
    fn beta_c(&self) -> f64 {
        self.inner.beta_c
    }
    #[getter]
    fn beta_h(&self) -> f64 {
        self.inner.beta_h
    }
    #[getter]
    fn xi(&self) -> f64 {
        self.inner.xi
    }

    fn with_xi(&self, xi: f64) -> PyResult<Self> {
        self.inner
            .with_xi(xi)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// `{"regime": ..., "checks": [{"inequality": ..., "holds": ...}, ...]}`.
    fn regime<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.regime())
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "CycleParams(omega_c={}, omega_h={}, beta_c={}, beta_h={}, xi={})",
            p.omega_c, p.omega_h, p.beta_c, p.beta_h, p.xi
        )
    }
}

/// Closed-form ledger as a list of `{stroke, label, kind, counterpart, value}`.
#[pyfunction]
fn ledger<'py>(py: Python<'py>, cycle: &str, params: PyCycleParams) -> PyResult<Bound<'py, PyAny>> {
    let l = analytic::ledger(kind(cycle)?, &params.inner).map_err(to_py_err)?;
    to_py(py, &l.entries)
}

/// Full closed-form report: ledger, works, heats, COP, `xi_critical`, efficiency.
#[pyfunction]
fn report<'py>(py: Python<'py>, cycle: &str, params: PyCycleParams) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &analytic::report(kind(cycle)?, &params.inner).map_err(to_py_err)?,
    )
}

/// Runs the density-matrix simulator; returns ledger, snapshot energies and
/// the comparison against the closed form.
#[pyfunction]
#[pyo3(signature = (cycle, params, tol = ORACLE_TOL))]
fn simulate<'py>(
    py: Python<'py>,
    cycle: &str,
    params: PyCycleParams,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let k = kind(cycle)?;
    let trace = run_cycle(k, &params.inner).map_err(to_py_err)?;
    let closed = analytic::ledger(k, &params.inner).map_err(to_py_err)?;
    let d = compare_ledgers(&trace.ledger, &closed, tol).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("ledger", to_py(py, &trace.ledger.entries)?)?;
    out.set_item("energies", trace.energies.clone())?;
    out.set_item("closure_residual", trace.closure_residual())?;
    out.set_item("discrepancy", to_py(py, &d)?)?;
    Ok(out.into_any())
}

/// Closed-form critical measurement strength.
#[pyfunction]
fn xi_critical(params: PyCycleParams) -> PyResult<f64> {
    analytic::xi_critical(&params.inner).map_err(to_py_err)
}

/// Critical measurement strength by bisection on the external work.
#[pyfunction]
fn xi_critical_numeric(params: PyCycleParams) -> PyResult<f64> {
    analysis::find_xi_critical_numeric(&params.inner).map_err(to_py_err)
}

/// Regime classification without building a parameter set first.
#[pyfunction]
fn regime<'py>(
    py: Python<'py>,
    omega_c: f64,
    omega_h: f64,
    beta_c: f64,
    beta_h: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &analysis::regime_validate(omega_c, omega_h, beta_c, beta_h).map_err(to_py_err)?,
    )
}

fn figure<'py>(py: Python<'py>, fig: FigureDataset) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &fig)
}

/// COP against measurement strength for the four preset hot temperatures.
#[pyfunction]
fn fig2(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    figure(py, analysis::fig2_dataset())
}

/// Cold-reservoir heat against measurement strength for the four presets.
#[pyfunction]
fn fig3(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    figure(py, analysis::fig3_dataset())
}

/// Kraus operators at strength `xi` as nested lists of complex numbers.
#[pyfunction]
fn kraus_operators(xi: f64) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let ch = MeasurementChannel::new(xi).map_err(to_py_err)?;
    Ok(ch
        .kraus_operators()
        .iter()
        .map(|m| {
            (0..2)
                .map(|r| (0..2).map(|c| m.get(r, c)).collect())
                .collect()
        })
        .collect())
}

/// Largest entry of `|Σ M†M - I|` at strength `xi`.
#[pyfunction]
fn completeness_residual(xi: f64) -> PyResult<f64> {
    Ok(MeasurementChannel::new(xi)
        .map_err(to_py_err)?
        .completeness_residual())
}

/// Ground and excited populations of a thermal qubit after the channel.
#[pyfunction]
fn measure_thermal(omega: f64, beta: f64, xi: f64) -> PyResult<(f64, f64)> {
    let h = QubitHamiltonian::new(omega).map_err(to_py_err)?;
    let rho = gibbs_state(&h, beta).map_err(to_py_err)?;
    let out = MeasurementChannel::new(xi)
        .map_err(to_py_err)?
        .apply(&rho)
        .map_err(to_py_err)?;
    let p = out.populations();
    Ok((p[0], p[1]))
}

/// Ergotropy of a thermal qubit at `(omega, beta)` after the channel.
#[pyfunction]
fn post_measurement_ergotropy(omega: f64, beta: f64, xi: f64) -> PyResult<f64> {
    let h = QubitHamiltonian::new(omega).map_err(to_py_err)?;
    let rho = gibbs_state(&h, beta).map_err(to_py_err)?;
    let out = MeasurementChannel::new(xi)
        .map_err(to_py_err)?
        .apply(&rho)
        .map_err(to_py_err)?;
    channel::ergotropy(&out, &h).map_err(to_py_err)
}

/// Seeded randomized verification; returns `(passed, summary_text)`.
#[pyfunction]
#[pyo3(signature = (seed = 20240, count = 1000, tol = ORACLE_TOL))]
fn verify(seed: u64, count: usize, tol: f64) -> PyResult<(bool, String)> {
    let r = run_verification(seed, count, tol, Fault::None).map_err(to_py_err)?;
    Ok((r.passed(), r.render()))
}

#[pymodule]
fn pyqfridge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("RegimeError", py.get_type::<RegimeError>())?;
    m.add("VerificationError", py.get_type::<VerificationError>())?;
    m.add(
        "CYCLE_KINDS",
        CycleKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
    )?;
    m.add_class::<PyCycleParams>()?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(xi_critical, m)?)?;
    m.add_function(wrap_pyfunction!(xi_critical_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(regime, m)?)?;
    m.add_function(wrap_pyfunction!(fig2, m)?)?;
    m.add_function(wrap_pyfunction!(fig3, m)?)?;
    m.add_function(wrap_pyfunction!(kraus_operators, m)?)?;
    m.add_function(wrap_pyfunction!(completeness_residual, m)?)?;
    m.add_function(wrap_pyfunction!(measure_thermal, m)?)?;
    m.add_function(wrap_pyfunction!(post_measurement_ergotropy, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
