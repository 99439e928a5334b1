//! Python bindings: parameters, symbolic operators, wave-packet evolution,
//! the Bateman group law and the verification suites.

use num_complex::Complex64 as C64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dampsym::arnold::{self, Gaussian};
use dampsym::bateman_group::{BatemanGroup, GroupElement};
use dampsym::ck_evolve::{self, EvolveConfig};
use dampsym::cli::{self, Command, RunConfig};
use dampsym::error::Error;
use dampsym::grid::{GridState, Picture};
use dampsym::mixedrep;
use dampsym::model_core::{self, PhysParams};
use dampsym::weylalg::WeylOp;
use dampsym::{ck_ops, damped_particle};

fn err(e: Error) -> PyErr {
    match e {
        Error::Config { .. } | Error::InvalidParams { .. } | Error::OverdampedUnsupported { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "Params", frozen)]
#[derive(Clone, Copy)]
struct PyParams(PhysParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (m = 1.0, gamma = 0.2, omega = 1.0, hbar = 1.0))]
    fn new(m: f64, gamma: f64, omega: f64, hbar: f64) -> PyResult<Self> {
        PhysParams::new(m, gamma, omega, hbar).map(PyParams).map_err(err)
    }

    #[getter]
    fn m(&self) -> f64 {
        self.0.m
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar
    }

    /// Reduced frequency sqrt(omega^2 - gamma^2/4).
    fn big_omega(&self) -> PyResult<f64> {
        self.0.big_omega().map_err(err)
    }

    fn __repr__(&self) -> String {
        let p = self.0;
        format!("Params(m={}, gamma={}, omega={}, hbar={})", p.m, p.gamma, p.omega, p.hbar)
    }
}

/// Differential operator with exponential-polynomial coefficients in t.
#[pyclass(name = "WeylOp", frozen)]
#[derive(Clone)]
struct PyWeylOp(WeylOp);

#[pymethods]
impl PyWeylOp {
    #[staticmethod]
    fn x() -> Self {
        PyWeylOp(WeylOp::x())
    }

    #[staticmethod]
    fn y() -> Self {
        PyWeylOp(WeylOp::y())
    }

    #[staticmethod]
    fn dx() -> Self {
        PyWeylOp(WeylOp::dx())
    }

    #[staticmethod]
    fn dy() -> Self {
        PyWeylOp(WeylOp::dy())
    }

    #[staticmethod]
    fn dt() -> Self {
        PyWeylOp(WeylOp::dt())
    }

    #[staticmethod]
    fn scalar(c: C64) -> Self {
        PyWeylOp(WeylOp::scalar(c))
    }

    fn commutator(&self, other: &PyWeylOp) -> Self {
        PyWeylOp(self.0.commutator(&other.0))
    }

    fn scale(&self, c: C64) -> Self {
        PyWeylOp(self.0.scale(c))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Largest coefficient difference in canonical form.
    fn deviation(&self, other: &PyWeylOp) -> f64 {
        self.0.deviation(&other.0)
    }

    /// Coefficients at time t as a list of ((x, y, dx, dy, dt), value).
    fn coeffs_at(&self, t: f64) -> Vec<((u32, u32, u32, u32, u32), C64)> {
        self.0.coeffs_at(t).into_iter().map(|(k, c)| ((k.x, k.y, k.dx, k.dy, k.dt), c)).collect()
    }

    fn __add__(&self, other: &PyWeylOp) -> Self {
        PyWeylOp(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyWeylOp) -> Self {
        PyWeylOp(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyWeylOp) -> Self {
        PyWeylOp(&self.0 * &other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// The Caldirola-Kanai operators X, P, Pi, Qt, G1, G2 and H_DHO.
#[pyfunction]
fn ck_operators(py: Python<'_>, params: &PyParams) -> PyResult<Vec<(String, Py<PyWeylOp>)>> {
    let cat = ck_ops::build_catalog(params.0).map_err(err)?;
    let mut out = Vec::new();
    for (name, op) in cat.seven() {
        out.push((name.to_string(), Py::new(py, PyWeylOp(op.clone()))?));
    }
    out.push(("H_DHO".into(), Py::new(py, PyWeylOp(ck_ops::h_dho(&params.0)))?));
    Ok(out)
}

#[pyclass(name = "Gaussian", frozen)]
#[derive(Clone, Copy)]
struct PyGaussian(Gaussian);

#[pymethods]
impl PyGaussian {
    #[new]
    #[pyo3(signature = (x0 = 0.0, p0 = 0.0, sigma = 1.0))]
    fn new(x0: f64, p0: f64, sigma: f64) -> PyResult<Self> {
        if !(sigma > 0.0) {
            return Err(PyValueError::new_err("sigma must be positive"));
        }
        Ok(PyGaussian(Gaussian::new(x0, p0, sigma)))
    }

    /// Exact damped evolution at (x, t).
    fn ck(&self, params: &PyParams, x: f64, t: f64) -> PyResult<C64> {
        let b = model_core::build_basis(params.0).map_err(err)?;
        self.0.ck(&b, x, t).map_err(err)
    }

    /// Free-particle evolution at (kappa, tau).
    fn free(&self, params: &PyParams, kappa: f64, tau: f64) -> C64 {
        self.0.free(params.0.m, params.0.hbar, kappa, tau)
    }
}

/// Wavefunction on a uniform grid.
#[pyclass(name = "GridState")]
#[derive(Clone)]
struct PyGridState(GridState);

#[pymethods]
impl PyGridState {
    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }

    #[getter]
    fn x0(&self) -> f64 {
        self.0.x0
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.0.dx
    }

    #[getter]
    fn is_free(&self) -> bool {
        self.0.picture == Picture::Free
    }

    fn xs(&self) -> Vec<f64> {
        self.0.xs()
    }

    fn psi(&self) -> Vec<C64> {
        self.0.psi.clone()
    }

    fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    fn expectation(&self, op: &PyWeylOp) -> PyResult<C64> {
        ck_evolve::expectation(&op.0, &self.0).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Crank-Nicolson evolution of a Gaussian; returns the kept snapshots.
#[pyfunction]
#[pyo3(signature = (params, packet, dt, n_steps, x_min = -16.0, x_max = 16.0, n = 2048, snapshot_every = 1))]
#[allow(clippy::too_many_arguments)]
fn evolve_gaussian(
    params: &PyParams,
    packet: &PyGaussian,
    dt: f64,
    n_steps: usize,
    x_min: f64,
    x_max: f64,
    n: usize,
    snapshot_every: usize,
) -> PyResult<Vec<PyGridState>> {
    let cfg = EvolveConfig { dt, n_steps, x_min, x_max, n, snapshot_every };
    cfg.validate().map_err(err)?;
    let p = params.0;
    let init = cfg.state_from(p, |x| packet.0.initial(p.hbar, x)).normalized();
    let snaps = ck_evolve::evolve_ck(&init, &cfg).map_err(err)?;
    Ok(snaps.into_iter().map(PyGridState).collect())
}

#[pyfunction]
fn qat_forward(params: &PyParams, state: &PyGridState) -> PyResult<PyGridState> {
    let b = model_core::build_basis(params.0).map_err(err)?;
    arnold::qat_forward(&state.0, &b).map(PyGridState).map_err(err)
}

#[pyfunction]
fn qat_inverse(params: &PyParams, state: &PyGridState) -> PyResult<PyGridState> {
    let b = model_core::build_basis(params.0).map_err(err)?;
    arnold::qat_inverse(&state.0, &b).map(PyGridState).map_err(err)
}

/// Classical Arnold map (x, t) -> (kappa, tau).
#[pyfunction]
fn arnold_map(params: &PyParams, x: f64, t: f64) -> PyResult<(f64, f64)> {
    let b = model_core::build_basis(params.0).map_err(err)?;
    model_core::arnold_map(&b, x, t).map_err(err)
}

/// Group law of the Bateman group on (t, x, y, p_x, p_y, theta) tuples.
#[pyclass(name = "BatemanGroup", frozen)]
struct PyBatemanGroup(BatemanGroup);

type Coords = (f64, f64, f64, f64, f64, f64);

fn element(c: Coords) -> GroupElement {
    GroupElement::new(c.0, c.1, c.2, c.3, c.4, c.5)
}

fn coords(g: GroupElement) -> Coords {
    (g.t, g.x, g.y, g.p_x, g.p_y, g.theta)
}

#[pymethods]
impl PyBatemanGroup {
    #[new]
    fn new(params: &PyParams) -> PyResult<Self> {
        BatemanGroup::new(params.0).map(PyBatemanGroup).map_err(err)
    }

    /// `g2 * g1`
    fn compose(&self, g2: Coords, g1: Coords) -> Coords {
        coords(self.0.compose(&element(g2), &element(g1)))
    }

    fn inverse(&self, g: Coords) -> Coords {
        coords(self.0.inverse(&element(g)))
    }
}

/// Monodromy test of the mixed-representation eigenfunction at energy E.
#[pyfunction]
fn monodromy<'py>(py: Python<'py>, params: &PyParams, energy: f64, lambda_: f64) -> PyResult<Bound<'py, PyAny>> {
    let m = mixedrep::monodromy_check(energy, lambda_, &params.0).map_err(err)?;
    to_py_json(py, &m)
}

/// Level of the single-valued spectrum, `n hbar Omega + lambda hbar gamma`.
#[pyfunction]
fn spectrum_level(params: &PyParams, n: i64, lambda_: f64) -> PyResult<f64> {
    mixedrep::EigenLabel::new(n, lambda_, &params.0).map(|l| l.energy).map_err(err)
}

/// Brackets of the damped-particle algebra up to level N.
#[pyfunction]
#[pyo3(signature = (params, level = 6))]
fn verify_dp<'py>(py: Python<'py>, params: &PyParams, level: usize) -> PyResult<Bound<'py, PyAny>> {
    let alg = damped_particle::build_dp(&params.0, level).map_err(err)?;
    let rep = match damped_particle::verify_dp_algebra(&alg) {
        Ok(r) => r,
        Err(Error::Mismatch(r)) => *r,
        Err(e) => return Err(err(e)),
    };
    to_py_json(py, &rep)
}

const COMMANDS: [(&str, Command); 9] = [
    ("simulate ck", Command::SimulateCk),
    ("simulate bateman", Command::SimulateBateman),
    ("verify ck-algebra", Command::VerifyCkAlgebra),
    ("verify bateman-algebra", Command::VerifyBatemanAlgebra),
    ("verify group", Command::VerifyGroup),
    ("verify reduction", Command::VerifyReduction),
    ("verify dp", Command::VerifyDp),
    ("spectrum", Command::Spectrum),
    ("qat-roundtrip", Command::QatRoundtrip),
];

/// Run a JSON configuration (as text) and return the report as a dict with
/// keys `command`, `passed` and `report`.
#[pyfunction]
fn run_config<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = RunConfig::from_json(config_json).map_err(err)?;
    let out = cli::run(&cfg).map_err(err)?;
    to_py_json(py, &out)
}

/// Default configuration for a command name such as "verify dp", as JSON text.
#[pyfunction]
fn default_config(command: &str) -> PyResult<String> {
    let cmd = COMMANDS
        .iter()
        .find(|(n, _)| *n == command)
        .map(|(_, c)| *c)
        .ok_or_else(|| PyValueError::new_err(format!("unknown command {command:?}")))?;
    serde_json::to_string_pretty(&RunConfig::new(cmd)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn dampsym_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyWeylOp>()?;
    m.add_class::<PyGaussian>()?;
    m.add_class::<PyGridState>()?;
    m.add_class::<PyBatemanGroup>()?;
    m.add_function(wrap_pyfunction!(ck_operators, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(qat_forward, m)?)?;
    m.add_function(wrap_pyfunction!(qat_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(arnold_map, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_level, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dp, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    Ok(())
}
