//! Python bindings. Matrices and vectors cross the boundary as nested lists,
//! structured results as JSON strings.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use core_lib::line::{self, ZPoint};
use core_lib::linalg::{Matrix, Vector};
use core_lib::lorentz::{self, BoostC, Tolerances};
use core_lib::verify::commands::{decompose_command, quotient_command};
use core_lib::verify::{ReportFormat, Suite, SuiteConfig, ToleranceTable};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err("expected a square matrix"));
    }
    Ok(Matrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn tolerances(orth: f64) -> Tolerances {
    Tolerances { orth, ..Default::default() }
}

/// Element of the identity component of SO(1, n+1).
#[pyclass(name = "LorentzElement", frozen)]
struct PyLorentz(lorentz::LorentzElement);

#[pymethods]
impl PyLorentz {
    #[new]
    #[pyo3(signature = (matrix, tol = 1e-10))]
    fn new(matrix: Vec<Vec<f64>>, tol: f64) -> PyResult<Self> {
        lorentz::LorentzElement::new(to_matrix(matrix)?, tol).map(Self).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, sigma = 1.0))]
    fn random(n: usize, seed: u64, sigma: f64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self(lorentz::random_lorentz(&mut rng, n, sigma))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        rows(self.0.matrix())
    }

    fn __matmul__(&self, other: &Self) -> Self {
        Self(self.0.mul(&other.0))
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    /// `(s, y, rotation)` with `g = c · b`.
    #[pyo3(signature = (tol = 1e-10))]
    fn iwasawa_cb(&self, tol: f64) -> PyResult<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        let (c, b) = lorentz::iwasawa_cb(&self.0, &tolerances(tol)).map_err(value_error)?;
        Ok((c.s, c.y.iter().copied().collect(), rows(b.matrix())))
    }

    /// `(rotation, s, y)` with `g = b · c`.
    #[pyo3(signature = (tol = 1e-10))]
    fn iwasawa_bc(&self, tol: f64) -> PyResult<(Vec<Vec<f64>>, f64, Vec<f64>)> {
        let (b, c) = lorentz::iwasawa_bc(&self.0, &tolerances(tol)).map_err(value_error)?;
        Ok((rows(b.matrix()), c.s, c.y.iter().copied().collect()))
    }

    /// Product in the groupoid over the rotation subgroup.
    #[pyo3(signature = (other, tol = 1e-10))]
    fn groupoid_multiply(&self, other: &Self, tol: f64) -> PyResult<Self> {
        lorentz::gb_multiply(&self.0, &other.0, &tolerances(tol)).map(Self).map_err(value_error)
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn groupoid_inverse(&self, tol: f64) -> PyResult<Self> {
        lorentz::gb_inverse(&self.0, &tolerances(tol)).map(Self).map_err(value_error)
    }

    /// Image in the line groupoid.
    #[pyo3(signature = (tol = 1e-10))]
    fn project(&self, tol: f64) -> PyResult<PyZPoint> {
        line::project_z(&self.0, &tolerances(tol)).map(PyZPoint).map_err(value_error)
    }

    fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("LorentzElement(n={})", self.0.n())
    }
}

/// Point `(p, v, s)` of the line groupoid: unit `p`, tangent `v`, scale `s > 0`.
#[pyclass(name = "ZPoint", frozen)]
struct PyZPoint(ZPoint);

#[pymethods]
impl PyZPoint {
    #[new]
    #[pyo3(signature = (p, v, s, tol = 1e-10))]
    fn new(p: Vec<f64>, v: Vec<f64>, s: f64, tol: f64) -> PyResult<Self> {
        ZPoint::new(Vector::from_vec(p), Vector::from_vec(v), s, tol).map(Self).map_err(value_error)
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.0.p.iter().copied().collect()
    }

    #[getter]
    fn v(&self) -> Vec<f64> {
        self.0.v.iter().copied().collect()
    }

    #[getter]
    fn s(&self) -> f64 {
        self.0.s
    }

    fn inverse(&self) -> Self {
        Self(line::z_inverse(&self.0))
    }

    fn source(&self) -> Self {
        Self(line::z_source(&self.0))
    }

    fn target(&self) -> Self {
        Self(line::z_target(&self.0))
    }

    #[pyo3(signature = (other, tol = 1e-10))]
    fn multiply(&self, other: &Self, tol: f64) -> PyResult<Self> {
        line::z_multiply(&self.0, &other.0, &tolerances(tol)).map(Self).map_err(value_error)
    }

    fn lift(&self) -> PyLorentz {
        PyLorentz(line::lift_z(&self.0))
    }

    fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("ZPoint(p={:?}, v={:?}, s={})", self.p(), self.v(), self.0.s)
    }
}

/// Boost `(s, y)` as a Lorentz matrix.
#[pyfunction]
fn boost(s: f64, y: Vec<f64>) -> PyResult<PyLorentz> {
    let c = BoostC::new(s, Vector::from_vec(y)).map_err(value_error)?;
    Ok(PyLorentz(lorentz::embed_c(&c)))
}

/// Quotient of a finite groupoid by an automorphism action, both as JSON text.
#[pyfunction]
fn quotient(groupoid_json: &str, action_json: &str) -> PyResult<String> {
    let outcome = quotient_command(groupoid_json, action_json).map_err(value_error)?;
    serde_json::to_string(&outcome).map_err(value_error)
}

/// Both factorizations of a matrix given as JSON rows.
#[pyfunction]
#[pyo3(signature = (matrix_json, tol = 1e-10))]
fn decompose(matrix_json: &str, tol: f64) -> PyResult<String> {
    let d = decompose_command(matrix_json, &tolerances(tol)).map_err(value_error)?;
    serde_json::to_string(&d).map_err(value_error)
}

/// Runs verification suites; returns `(all_pass, json_lines_report)`.
#[pyfunction]
#[pyo3(signature = (n = 3, samples = 1000, seed = 42, suites = None, tol = None))]
fn run_suites(
    n: usize,
    samples: usize,
    seed: u64,
    suites: Option<Vec<String>>,
    tol: Option<BTreeMap<String, f64>>,
) -> PyResult<(bool, String)> {
    let mut tolerances = ToleranceTable::default();
    for (name, value) in tol.unwrap_or_default() {
        tolerances.set(&name, value).map_err(value_error)?;
    }
    let mut config = SuiteConfig { n, samples, seed, tolerances, ..Default::default() };
    if let Some(names) = suites {
        let parsed: Vec<Suite> = names.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(value_error)?;
        config = config.only(&parsed);
    }
    let report = core_lib::verify::run_suites(&config).map_err(value_error)?;
    Ok((report.all_pass(), report.render(ReportFormat::Json)))
}

#[pymodule]
fn linegroupoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLorentz>()?;
    m.add_class::<PyZPoint>()?;
    m.add_function(wrap_pyfunction!(boost, m)?)?;
    m.add_function(wrap_pyfunction!(quotient, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(run_suites, m)?)?;
    Ok(())
}
