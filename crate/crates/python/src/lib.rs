//! Python bindings for `bm2d`.

use bm2d::{json, BodyDescriptor, EllipseParams, Error, Interpolation, SolverOptions};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn options(grid_size: usize) -> SolverOptions {
    SolverOptions {
        grid_size,
        ..SolverOptions::default()
    }
}

/// Radial function of a centrally symmetric star body.
#[pyclass(frozen, name = "Gauge")]
pub struct PyGauge(bm2d::Gauge);

#[pymethods]
impl PyGauge {
    #[staticmethod]
    fn circle() -> Self {
        PyGauge(bm2d::Gauge::circle())
    }

    /// Unit ball of the lp norm; `p` may be `float("inf")`.
    #[staticmethod]
    fn lp(p: f64) -> PyResult<Self> {
        bm2d::Gauge::from_lp(p).map(PyGauge).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (vertices, symmetrize = false))]
    fn polygon(vertices: Vec<[f64; 2]>, symmetrize: bool) -> PyResult<Self> {
        bm2d::Gauge::from_polygon(&vertices, symmetrize).map(PyGauge).map_err(to_py)
    }

    /// Radii at `k π / n` for `k = 0..n`; `interpolation` is "linear" or "cubic".
    #[staticmethod]
    #[pyo3(signature = (values, interpolation = "linear"))]
    fn samples(values: Vec<f64>, interpolation: &str) -> PyResult<Self> {
        let interpolation = match interpolation {
            "linear" => Interpolation::Linear,
            "cubic" => Interpolation::MonotoneCubic,
            other => return Err(PyValueError::new_err(format!("unknown interpolation {other:?}"))),
        };
        bm2d::Gauge::from_samples_with(&values, interpolation).map(PyGauge).map_err(to_py)
    }

    /// Ellipse `{x : a2 + b2 cos 2φ + c2 sin 2φ = 1/|x|²}`.
    #[staticmethod]
    fn ellipse(a2: f64, b2: f64, c2: f64) -> PyResult<Self> {
        let e = EllipseParams::new(a2, b2, c2).map_err(to_py)?;
        Ok(PyGauge(bm2d::Gauge::from_ellipse(e)))
    }

    /// Parses a JSON body descriptor.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        BodyDescriptor::from_json(text)
            .and_then(|d| d.to_gauge())
            .map(PyGauge)
            .map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind_name()
    }

    fn eval(&self, phi: f64) -> f64 {
        self.0.eval(phi)
    }

    fn boundary_point(&self, phi: f64) -> [f64; 2] {
        self.0.boundary_point(phi)
    }

    fn transformed(&self, m: [[f64; 2]; 2]) -> PyResult<Self> {
        self.0.transformed(m).map(PyGauge).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Gauge(kind={:?})", self.0.kind_name())
    }
}

/// Banach-Mazur distance to the Euclidean plane.
#[pyfunction]
#[pyo3(signature = (gauge, grid_size = 4096))]
fn distance(py: Python<'_>, gauge: &PyGauge, grid_size: usize) -> PyResult<f64> {
    py.detach(|| bm2d::distance(&gauge.0, &options(grid_size))).map_err(to_py)
}

/// Optimal ellipse coefficients `(a2, b2, c2)` and the uniform defect.
#[pyfunction]
#[pyo3(signature = (gauge, grid_size = 4096))]
fn solve(py: Python<'_>, gauge: &PyGauge, grid_size: usize) -> PyResult<([f64; 3], f64)> {
    let sol = py
        .detach(|| bm2d::solve_uniform(&gauge.0, &options(grid_size)))
        .map_err(to_py)?;
    Ok((sol.params.as_array(), sol.defect))
}

/// Full solve report as JSON text.
#[pyfunction]
#[pyo3(signature = (gauge, grid_size = 4096))]
fn report_json(py: Python<'_>, gauge: &PyGauge, grid_size: usize) -> PyResult<String> {
    py.detach(|| {
        let sol = bm2d::solve_uniform(&gauge.0, &options(grid_size))?;
        bm2d::build_report(&gauge.0, &sol)
    })
    .map_err(to_py)
    .and_then(|r| json::to_string(&r).map_err(|e| PyRuntimeError::new_err(e.to_string())))
}

/// `sup |log r - g|` for the ellipse `(a2, b2, c2)` on `n_phi` uniform angles.
#[pyfunction]
#[pyo3(signature = (gauge, params, n_phi = 8192))]
fn oracle_value(gauge: &PyGauge, params: [f64; 3], n_phi: usize) -> PyResult<f64> {
    let e = EllipseParams::from_array(params).map_err(to_py)?;
    Ok(bm2d::oracle_value(&gauge.0, &e, n_phi))
}

/// Square root of the positive definite matrix `[[m11, m12], [m12, m22]]`.
#[pyfunction]
fn pd_sqrt(m11: f64, m12: f64, m22: f64) -> PyResult<[[f64; 2]; 2]> {
    let s = bm2d::PdMatrix2::new(m11, m12, m22).map_err(to_py)?;
    Ok(bm2d::ellipse::pd_sqrt(&s).rows())
}

#[pymodule]
fn pybm2d(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGauge>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(report_json, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_value, m)?)?;
    m.add_function(wrap_pyfunction!(pd_sqrt, m)?)?;
    Ok(())
}
