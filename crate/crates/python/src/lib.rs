//! Python bindings: the distorted-means kernel, model densities, the
//! Neumann eigensolvers, the Hardy-type estimators and the bound dispatch.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

use cdd_spectral as core;

fn err<T>(r: core::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn cd(k: f64, n: f64) -> PyResult<core::CurvatureDimension> {
    err(core::CurvatureDimension::new(k, n))
}

fn grid(x0: f64, dx: f64, values: Vec<f64>) -> PyResult<core::GridDensity> {
    err(core::GridDensity::new(x0, dx, values))
}

fn grid_dict<'py>(py: Python<'py>, g: &core::GridDensity) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("x0", g.x0)?;
    d.set_item("dx", g.dx)?;
    d.set_item("values", g.values.clone())?;
    Ok(d)
}

fn eigen_dict<'py>(py: Python<'py>, r: &core::EigenResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lambda", r.lambda)?;
    d.set_item("residual", r.phase_residual)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("eigenfunction", grid_dict(py, &r.eigenfunction)?)?;
    Ok(d)
}

fn bound_dict<'py>(py: Python<'py>, r: &core::BoundResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("case", r.case_label.clone())?;
    d.set_item("method", serde_json::to_value(r.method).unwrap().as_str().unwrap())?;
    d.set_item("exactness", serde_json::to_value(r.exactness).unwrap().as_str().unwrap())?;
    Ok(d)
}

fn estimate_dict<'py>(py: Python<'py>, e: &core::TwoSidedEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("b_minus", e.b_minus)?;
    d.set_item("b_plus", e.b_plus)?;
    d.set_item("lower", e.lower)?;
    d.set_item("upper", e.upper)?;
    d.set_item("method", e.method.clone())?;
    d.set_item("midpoint", e.midpoint())?;
    Ok(d)
}

/// Distortion coefficient `sigma^(t)_{K, NN}(theta)`.
#[pyfunction]
fn sigma(t: f64, k: f64, nn: f64, theta: f64) -> PyResult<f64> {
    err(core::sigma(t, k, nn, theta))
}

/// Distortion coefficient `tau^(t)_{K, N}(theta)`.
#[pyfunction]
fn tau(t: f64, k: f64, n: f64, theta: f64) -> PyResult<f64> {
    err(core::tau(t, k, n, theta))
}

/// Distorted mean `M^(t)_{K, NN}[d](a, b)`.
#[pyfunction]
fn distorted_mean_m(t: f64, k: f64, nn: f64, d: f64, a: f64, b: f64) -> PyResult<f64> {
    err(core::distorted_mean_m(t, k, nn, d, a, b))
}

/// Distorted mean `M~^(t)_{K, N}[d](a, b)`.
#[pyfunction]
fn distorted_mean_mtilde(t: f64, k: f64, n: f64, d: f64, a: f64, b: f64) -> PyResult<f64> {
    err(core::distorted_mean_mtilde(t, k, n, d, a, b))
}

/// Classical weighted mean with limit branches at p in {0, +-inf}.
#[pyfunction]
fn classical_mean(p: f64, t: f64, a: f64, b: f64) -> PyResult<f64> {
    err(core::classical_mean(p, t, a, b))
}

/// Model density value `J_{K,N,h}(x)`.
#[pyfunction]
fn model_density_value(k: f64, n: f64, h: f64, x: f64) -> PyResult<f64> {
    Ok(core::model_density_value(&cd(k, n)?, h, x))
}

/// Maximal open interval where the model density is positive and finite.
#[pyfunction]
fn model_support(k: f64, n: f64, h: f64) -> PyResult<(f64, f64)> {
    Ok(core::model_support(&cd(k, n)?, h))
}

/// Canonical shift/scale decomposition `J = g * Y(. + s)`.
#[pyfunction]
fn canonical_form(py: Python<'_>, k: f64, n: f64, h: f64) -> PyResult<Py<PyDict>> {
    let f = core::canonical_form(&cd(k, n)?, h);
    let d = PyDict::new(py);
    d.set_item("case", f.case.to_string())?;
    d.set_item("shift", f.shift)?;
    d.set_item("scale", f.scale)?;
    d.set_item("reflected", f.reflected)?;
    Ok(d.into())
}

/// Sample the model density on a uniform grid over `[a, b]`.
#[pyfunction]
fn sample_density(
    py: Python<'_>,
    k: f64,
    n: f64,
    h: f64,
    a: f64,
    b: f64,
    n_points: usize,
) -> PyResult<Py<PyDict>> {
    let m = err(core::ModelMeasure::new(cd(k, n)?, h, a, b))?;
    let g = err(core::sample_density(&m, n_points))?;
    Ok(grid_dict(py, &g)?.into())
}

/// Differential curvature-dimension check of a sampled density.
#[pyfunction]
fn cd_differential_check(
    py: Python<'_>,
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    k: f64,
    n: f64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let g = grid(x0, dx, values)?;
    let rep = err(core::cd_differential_check(&g, k, n, tol))?;
    let d = PyDict::new(py);
    d.set_item("passed", rep.passed())?;
    d.set_item("max_violation", rep.max_violation)?;
    d.set_item("violation_locations", rep.violation_locations.clone())?;
    Ok(d.into())
}

/// `pi_p = 2 pi / (p sin(pi/p))`.
#[pyfunction]
fn pi_p(p: f64) -> PyResult<f64> {
    err(core::pi_p(p))
}

/// Cached generalized trigonometric evaluator for one exponent.
#[pyclass(name = "PTrig")]
struct PyPTrig {
    inner: core::PTrig,
}

#[pymethods]
impl PyPTrig {
    #[new]
    fn new(p: f64) -> PyResult<Self> {
        Ok(Self { inner: err(core::PTrig::new(p))? })
    }
    fn pi_p(&self) -> f64 {
        self.inner.pi_p()
    }
    fn sin_p(&self, x: f64) -> f64 {
        self.inner.sin_p(x)
    }
    fn cos_p(&self, x: f64) -> f64 {
        self.inner.cos_p(x)
    }
}

/// First nonzero Neumann eigenvalue of the model measure on `[a, b]`.
#[pyfunction]
fn sl_first_eigenvalue(
    py: Python<'_>,
    k: f64,
    n: f64,
    h: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let m = err(core::ModelMeasure::new(cd(k, n)?, h, a, b))?;
    let r = err(core::sl_first_eigenvalue(&m, tol))?;
    Ok(eigen_dict(py, &r)?.into())
}

/// Same eigenvalue on a sampled density.
#[pyfunction]
fn sl_first_eigenvalue_grid(
    py: Python<'_>,
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let g = grid(x0, dx, values)?;
    let r = err(core::sl_first_eigenvalue_grid(&g, tol))?;
    Ok(eigen_dict(py, &r)?.into())
}

/// Exhaustion eigenvalue over a possibly singular or unbounded interval.
#[pyfunction]
fn sl_eigenvalue_exhaustion(
    py: Python<'_>,
    k: f64,
    n: f64,
    h: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let ex = err(core::sl_eigenvalue_exhaustion(&cd(k, n)?, h, a, b, tol))?;
    let d = PyDict::new(py);
    d.set_item("value", ex.value)?;
    d.set_item("zero_flag", ex.zero_flag)?;
    d.set_item("levels", ex.levels.clone())?;
    Ok(d.into())
}

/// First nonzero Neumann p-Laplacian eigenvalue of the model measure.
#[pyfunction]
fn plap_first_eigenvalue(
    py: Python<'_>,
    k: f64,
    n: f64,
    h: f64,
    a: f64,
    b: f64,
    p: f64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let m = err(core::ModelMeasure::new(cd(k, n)?, h, a, b))?;
    let r = err(core::plap_first_eigenvalue(&m, p, tol))?;
    let d = PyDict::new(py);
    d.set_item("p", r.p)?;
    d.set_item("lambda", r.lambda)?;
    d.set_item("residual", r.phase_residual)?;
    d.set_item("iterations", r.iterations)?;
    Ok(d.into())
}

/// Sharp Poincare lower bound for CDD(K, N, D).
#[pyfunction]
fn poincare_bound(py: Python<'_>, k: f64, n: f64, d: f64) -> PyResult<Py<PyDict>> {
    let req = core::BoundRequest { inequality: core::Inequality::Poincare, k, n, d, p: None };
    let r = err(core::poincare_bound(&req))?;
    Ok(bound_dict(py, &r)?.into())
}

/// Sharp p-Poincare lower bound for CDD(K, N, D).
#[pyfunction]
fn p_poincare_bound(py: Python<'_>, k: f64, n: f64, d: f64, p: f64) -> PyResult<Py<PyDict>> {
    let req = core::BoundRequest { inequality: core::Inequality::PPoincare, k, n, d, p: Some(p) };
    let r = err(core::p_poincare_bound(&req))?;
    Ok(bound_dict(py, &r)?.into())
}

/// Log-Sobolev lower bound for CDD(K, N, D).
#[pyfunction]
fn log_sobolev_bound(py: Python<'_>, k: f64, n: f64, d: f64) -> PyResult<Py<PyDict>> {
    let req = core::BoundRequest { inequality: core::Inequality::LogSobolev, k, n, d, p: None };
    let r = err(core::log_sobolev_bound(&req))?;
    Ok(bound_dict(py, &r)?.into())
}

/// Muckenhoupt two-sided Poincare estimate of a sampled density.
#[pyfunction]
fn muckenhoupt_estimate(
    py: Python<'_>,
    x0: f64,
    dx: f64,
    values: Vec<f64>,
) -> PyResult<Py<PyDict>> {
    let dist = err(core::build_distribution(&grid(x0, dx, values)?))?;
    Ok(estimate_dict(py, &core::muckenhoupt_estimate(&dist))?.into())
}

/// Bobkov-Goetze two-sided log-Sobolev estimate of a sampled density.
#[pyfunction]
#[pyo3(signature = (x0, dx, values, bracket_factor = core::DEFAULT_BG_BRACKET))]
fn bobkov_gotze_estimate(
    py: Python<'_>,
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    bracket_factor: f64,
) -> PyResult<Py<PyDict>> {
    let dist = err(core::build_distribution(&grid(x0, dx, values)?))?;
    Ok(estimate_dict(py, &core::bobkov_gotze_estimate(&dist, bracket_factor))?.into())
}

/// Closed-form `Upsilon_0(k, D)`.
#[pyfunction]
fn ls_upsilon0(k: f64, d: f64) -> PyResult<f64> {
    err(core::ls_upsilon0(k, d))
}

/// Closed-form log-Sobolev bound; returns `(value, exactness)`.
#[pyfunction]
fn ls_bound_closed(k: f64, d: f64) -> PyResult<(f64, String)> {
    let (v, e) = err(core::ls_bound_closed(k, d))?;
    Ok((v, serde_json::to_value(e).unwrap().as_str().unwrap().to_string()))
}

/// Cheeger constant of a sampled (log-concave) density via the ray profile.
#[pyfunction]
fn cheeger_constant(x0: f64, dx: f64, values: Vec<f64>) -> PyResult<f64> {
    let dist = err(core::build_distribution(&grid(x0, dx, values)?))?;
    Ok(core::cheeger_constant(&dist))
}

/// Ledoux constant of a sampled (log-concave) density via the ray profile.
#[pyfunction]
fn ledoux_constant(x0: f64, dx: f64, values: Vec<f64>) -> PyResult<f64> {
    let dist = err(core::build_distribution(&grid(x0, dx, values)?))?;
    Ok(core::ledoux_constant(&dist))
}

#[pymodule]
fn cddspectral(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(distorted_mean_m, m)?)?;
    m.add_function(wrap_pyfunction!(distorted_mean_mtilde, m)?)?;
    m.add_function(wrap_pyfunction!(classical_mean, m)?)?;
    m.add_function(wrap_pyfunction!(model_density_value, m)?)?;
    m.add_function(wrap_pyfunction!(model_support, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(sample_density, m)?)?;
    m.add_function(wrap_pyfunction!(cd_differential_check, m)?)?;
    m.add_function(wrap_pyfunction!(pi_p, m)?)?;
    m.add_function(wrap_pyfunction!(sl_first_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(sl_first_eigenvalue_grid, m)?)?;
    m.add_function(wrap_pyfunction!(sl_eigenvalue_exhaustion, m)?)?;
    m.add_function(wrap_pyfunction!(plap_first_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_bound, m)?)?;
    m.add_function(wrap_pyfunction!(p_poincare_bound, m)?)?;
    m.add_function(wrap_pyfunction!(log_sobolev_bound, m)?)?;
    m.add_function(wrap_pyfunction!(muckenhoupt_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(bobkov_gotze_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(ls_upsilon0, m)?)?;
    m.add_function(wrap_pyfunction!(ls_bound_closed, m)?)?;
    m.add_function(wrap_pyfunction!(cheeger_constant, m)?)?;
    m.add_function(wrap_pyfunction!(ledoux_constant, m)?)?;
    m.add_class::<PyPTrig>()?;
    Ok(())
}
