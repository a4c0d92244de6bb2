//! Python bindings. Vertices are 0-based on the Python side; structured
//! results (detector copies, hitting times, reports) come back as plain
//! dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use cohomconn::cohomology;
use cohomconn::experiment::{run_verify_suite, sample_gp as sample_complex};
use cohomconn::obstructions;
use cohomconn::process::{sample_birth_times, scan_process as scan, ScanOptions};
use cohomconn::thresholds;
use cohomconn::{Complex, Model, Simplex};

fn err(e: cohomconn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn simplex(v: Vec<u32>) -> PyResult<Simplex> {
    Simplex::new(v).map_err(err)
}

fn model(name: &str) -> PyResult<Model> {
    name.parse().map_err(|_| PyValueError::new_err(format!("unknown model {name:?}")))
}

/// Serialises through JSON into Python objects.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "Complex", module = "cohomconn", frozen)]
struct PyComplex {
    inner: Complex,
}

#[pymethods]
impl PyComplex {
    #[new]
    #[pyo3(signature = (n, k, hyperedges, model="g"))]
    fn new(n: usize, k: usize, hyperedges: Vec<Vec<u32>>, model: &str) -> PyResult<Self> {
        let hs = hyperedges.into_iter().map(simplex).collect::<PyResult<Vec<_>>>()?;
        let inner = Complex::build(n, k, self::model(model)?, hs).map_err(err)?;
        Ok(PyComplex { inner })
    }

    /// Parses the text fixture format (1-based vertices).
    #[staticmethod]
    fn from_fixture(text: &str) -> PyResult<Self> {
        Ok(PyComplex {
            inner: Complex::parse_fixture(text).map_err(err)?,
        })
    }

    fn to_fixture(&self) -> String {
        self.inner.to_fixture()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.inner.model().name()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn simplices(&self, d: usize) -> PyResult<Vec<Vec<u32>>> {
        let idx = self.inner.simplices(d).map_err(err)?;
        Ok(idx.simplices().iter().map(|s| s.vertices().to_vec()).collect())
    }

    fn contains(&self, s: Vec<u32>) -> PyResult<bool> {
        Ok(self.inner.contains(&simplex(s)?))
    }

    fn k_degree(&self, s: Vec<u32>) -> PyResult<usize> {
        self.inner.k_degree(&simplex(s)?).map_err(err)
    }

    fn add_simplex(&self, b: Vec<u32>) -> PyResult<Self> {
        Ok(PyComplex {
            inner: self.inner.add_simplex(&simplex(b)?).map_err(err)?,
        })
    }

    fn betti(&self, j: usize) -> PyResult<usize> {
        cohomology::betti(&self.inner, j).map_err(err)
    }

    fn bettis(&self) -> Vec<usize> {
        cohomology::summary(&self.inner).bettis
    }

    fn component_count(&self) -> usize {
        cohomology::component_count(&self.inner)
    }

    fn is_j_cohom_connected(&self, j: usize) -> PyResult<bool> {
        cohomology::is_j_cohom_connected(&self.inner, j).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Complex(n={}, k={}, model={}, f={:?})",
            self.inner.n(),
            self.inner.k(),
            self.inner.model().name(),
            self.inner.f_vector()
        )
    }
}

#[pyfunction]
fn find_mj_minus(py: Python<'_>, c: &PyComplex, j: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &obstructions::find_mj_minus(&c.inner, j).map_err(err)?)
}

#[pyfunction]
fn find_mj(py: Python<'_>, c: &PyComplex, j: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &obstructions::find_mj(&c.inner, j).map_err(err)?)
}

#[pyfunction]
fn find_mj_star(py: Python<'_>, c: &PyComplex, j: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &obstructions::find_mj_star(&c.inner, j).map_err(err)?)
}

#[pyfunction]
fn find_local_obstacles(py: Python<'_>, c: &PyComplex, j: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &obstructions::find_local_obstacles(&c.inner, j).map_err(err)?)
}

/// Apex vertices of the shells through `b` in the complex plus `b`.
#[pyfunction]
fn count_shells_through(c: &PyComplex, b: Vec<u32>) -> PyResult<Vec<u32>> {
    Ok(obstructions::count_shells_through(&c.inner, &simplex(b)?)
        .map_err(err)?
        .apexes)
}

#[pyfunction]
fn is_hollow_shell(c: &PyComplex, a: Vec<u32>) -> PyResult<bool> {
    obstructions::is_hollow_shell(&c.inner, &simplex(a)?).map_err(err)
}

#[pyfunction]
fn find_isolated(c: &PyComplex) -> PyResult<Vec<Vec<u32>>> {
    Ok(obstructions::find_isolated(&c.inner)
        .map_err(err)?
        .iter()
        .map(|s| s.vertices().to_vec())
        .collect())
}

#[pyfunction]
fn is_traversable(c: &PyComplex, s: Vec<Vec<u32>>) -> PyResult<bool> {
    let s = s.into_iter().map(simplex).collect::<PyResult<Vec<_>>>()?;
    obstructions::is_traversable(&c.inner, &s).map_err(err)
}

/// `(w, b, holds)` for the j-cochain with the given support on the full
/// simplex on `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, j, support, budget=1 << 24))]
fn meshulam_wallach_check(n: usize, j: usize, support: Vec<Vec<u32>>, budget: u64) -> PyResult<(u32, u32, bool)> {
    let s = support.into_iter().map(simplex).collect::<PyResult<Vec<_>>>()?;
    let r = obstructions::meshulam_wallach_check(n, j, &s, budget).map_err(err)?;
    Ok((r.w, r.b, r.holds))
}

#[pyfunction]
fn thresholds_for(py: Python<'_>, n: usize, k: usize, j: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &thresholds::Thresholds::new(n, k, j).map_err(err)?)
}

#[pyfunction]
fn expected_mj_minus(n: usize, k: usize, j: usize, p: f64) -> f64 {
    thresholds::expected_mj_minus(n, k, j, p)
}

#[pyfunction]
#[pyo3(name = "poisson_lambda")]
fn lambda(k: usize, j: usize, c: f64) -> f64 {
    thresholds::lambda(k, j, c)
}

/// `G_p` (or `Y_p`) from a seeded ChaCha stream.
#[pyfunction]
#[pyo3(signature = (n, k, p, seed, model="g"))]
fn sample_gp(n: usize, k: usize, p: f64, seed: u64, model: &str) -> PyResult<PyComplex> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Ok(PyComplex {
        inner: sample_complex(n, k, p, self::model(model)?, &mut rng).map_err(err)?,
    })
}

/// Samples a birth-time table and scans it; returns hitting times and,
/// when requested, the per-event trace.
#[pyfunction]
#[pyo3(signature = (n, k, j, seed, model="g", trace=false))]
fn scan_process(py: Python<'_>, n: usize, k: usize, j: usize, seed: u64, model: &str, trace: bool) -> PyResult<Py<PyAny>> {
    let table = sample_birth_times(n, k, seed).map_err(err)?;
    let r = scan(&table, j, self::model(model)?, ScanOptions { trace }).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn verify(py: Python<'_>) -> PyResult<Py<PyAny>> {
    to_py(py, &run_verify_suite())
}

#[pymodule]
#[pyo3(name = "cohomconn")]
fn cohomconn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_function(wrap_pyfunction!(find_mj_minus, m)?)?;
    m.add_function(wrap_pyfunction!(find_mj, m)?)?;
    m.add_function(wrap_pyfunction!(find_mj_star, m)?)?;
    m.add_function(wrap_pyfunction!(find_local_obstacles, m)?)?;
    m.add_function(wrap_pyfunction!(count_shells_through, m)?)?;
    m.add_function(wrap_pyfunction!(is_hollow_shell, m)?)?;
    m.add_function(wrap_pyfunction!(find_isolated, m)?)?;
    m.add_function(wrap_pyfunction!(is_traversable, m)?)?;
    m.add_function(wrap_pyfunction!(meshulam_wallach_check, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds_for, m)?)?;
    m.add_function(wrap_pyfunction!(expected_mj_minus, m)?)?;
    m.add_function(wrap_pyfunction!(lambda, m)?)?;
    m.add_function(wrap_pyfunction!(sample_gp, m)?)?;
    m.add_function(wrap_pyfunction!(scan_process, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
