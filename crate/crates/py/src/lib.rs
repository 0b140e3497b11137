use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use trigonal_core::assembler;
use trigonal_core::chow;
use trigonal_core::confspace::{self, CellStratification};
use trigonal_core::evalmap::{self, CodimMode};
use trigonal_core::quotient;
use trigonal_core::vassiliev;
use trigonal_core::{Error, Field};

create_exception!(trigonal, RangeError, PyValueError, "Request outside the supported range.");
create_exception!(trigonal, ConsistencyError, PyException, "A consistency check failed.");

fn to_py(err: Error) -> PyErr {
    if err.is_consistency_failure() {
        ConsistencyError::new_err(err.to_string())
    } else {
        RangeError::new_err(err.to_string())
    }
}

/// A finite direct sum of Tate twists, graded by degree.
#[pyclass(name = "GradedTate", module = "trigonal", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGradedTate {
    inner: trigonal_core::GradedTate,
}

impl From<trigonal_core::GradedTate> for PyGradedTate {
    fn from(inner: trigonal_core::GradedTate) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyGradedTate {
    /// Builds a space from `(degree, weight, mult)` triples.
    #[new]
    #[pyo3(signature = (entries = Vec::new()))]
    fn new(entries: Vec<(i64, i64, u64)>) -> Self {
        trigonal_core::GradedTate::from_entries(entries).into()
    }

    fn classes(&self) -> Vec<(i64, i64, u64)> {
        self.inner.iter().map(|c| (c.degree, c.weight, c.mult)).collect()
    }

    fn get(&self, degree: i64, weight: i64) -> u64 {
        self.inner.get(degree, weight)
    }

    fn total_dim(&self) -> u64 {
        self.inner.total_dim()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn truncate(&self, max_degree: i64) -> Self {
        self.inner.truncate(max_degree).into()
    }

    fn tensor(&self, other: PyRef<'_, Self>) -> Self {
        self.inner.tensor(&other.inner).into()
    }

    fn divide(&self, fiber: PyRef<'_, Self>) -> PyResult<Self> {
        self.inner.divide(&fiber.inner).map(Into::into).map_err(to_py)
    }

    fn twist_shift(&self, d_degree: i64, d_weight: i64) -> Self {
        self.inner.twist_shift(d_degree, d_weight).into()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("classes serialize")
    }

    fn __len__(&self) -> usize {
        self.inner.total_dim() as usize
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GradedTate({:?})", self.classes())
    }
}

/// The linear system `|hE_n + dF_n|` on the Hirzebruch surface `F_n`.
#[pyclass(name = "SurfaceSpec", module = "trigonal", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySurfaceSpec {
    inner: trigonal_core::SurfaceSpec,
}

#[pymethods]
impl PySurfaceSpec {
    #[new]
    #[pyo3(signature = (n, d, h = 3))]
    fn new(n: u32, d: i64, h: u32) -> PyResult<Self> {
        let inner = trigonal_core::SurfaceSpec::new(n, h, d).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn h(&self) -> u32 {
        self.inner.h
    }

    #[getter]
    fn d(&self) -> i64 {
        self.inner.d
    }

    fn genus(&self) -> i64 {
        self.inner.genus()
    }

    fn section_dimension(&self) -> PyResult<i64> {
        trigonal_core::section_dimension(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("SurfaceSpec(n={}, d={}, h={})", self.inner.n, self.inner.d, self.inner.h)
    }
}

#[pyfunction]
fn twisted_bm_config(cells: Vec<u32>, k: usize) -> PyResult<PyGradedTate> {
    let cells = CellStratification::new(cells).map_err(to_py)?;
    Ok(confspace::twisted_bm_config(&cells, k).into())
}

#[pyfunction]
fn grassmannian_bm(k: usize, m: usize) -> PyGradedTate {
    confspace::grassmannian_bm(k, m).into()
}

/// Columns of the Vassiliev `E^1` page, keyed by column index.
#[pyfunction]
fn e1_page(spec: PyRef<'_, PySurfaceSpec>) -> PyResult<Vec<(usize, PyGradedTate)>> {
    let page = vassiliev::e1_page(&spec.inner).map_err(to_py)?;
    Ok(page.columns.into_iter().map(|(p, c)| (p, c.into())).collect())
}

/// `(classes, max_degree)` for the complement of the discriminant.
#[pyfunction]
fn stable_cohomology_sections(spec: PyRef<'_, PySurfaceSpec>) -> PyResult<(PyGradedTate, i64)> {
    let (h, top) = vassiliev::stable_cohomology_sections(&spec.inner).map_err(to_py)?;
    Ok((h.into(), top))
}

#[pyfunction]
#[pyo3(signature = (n, g, framed = false))]
fn stratum_cohomology(n: i64, g: i64, framed: bool) -> PyResult<(PyGradedTate, i64)> {
    let (h, top) = if framed {
        quotient::framed_stratum_cohomology(n, g)
    } else {
        quotient::stratum_cohomology(n, g)
    }
    .map_err(to_py)?;
    Ok((h.into(), top))
}

/// `(classes, bound, strict)`.
#[pyfunction]
#[pyo3(signature = (g, framed = false))]
fn stable_cohomology(g: i64, framed: bool) -> PyResult<(PyGradedTate, i64, bool)> {
    let s = assembler::stable_cohomology(g, framed).map_err(to_py)?;
    Ok((s.classes.into(), s.range.bound, s.range.strict))
}

#[pyfunction]
#[pyo3(signature = (g, framed = false))]
fn stable_range(g: i64, framed: bool) -> PyResult<(i64, bool)> {
    let r = assembler::stable_range(g, framed).map_err(to_py)?;
    Ok((r.bound, r.strict))
}

#[pyfunction]
#[pyo3(signature = (g, n, up_to = 2))]
fn truncated_quotient_dims(g: i64, n: i64, up_to: u32) -> PyResult<Vec<usize>> {
    let ideal = chow::ideal_generators(g, n).map_err(to_py)?;
    Ok(chow::truncated_quotient_dims(&ideal, up_to))
}

/// Runs the codimension check and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (spec, points, trials = 50, seed = 0, mode = "generic", prime = None))]
fn verify_codimension<'py>(
    py: Python<'py>,
    spec: PyRef<'_, PySurfaceSpec>,
    points: usize,
    trials: u64,
    seed: u64,
    mode: &str,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = match mode {
        "generic" => CodimMode::Generic,
        "sharpness" => CodimMode::Sharpness,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let field = match prime {
        Some(p) => Field::prime(p).map_err(to_py)?,
        None => Field::default_prime(),
    };
    let r = evalmap::verify_codimension(&spec.inner, points, trials, seed, mode, field, false).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    d.set_item("expected_rank", r.expected_rank)?;
    d.set_item("min_rank", r.min_rank)?;
    d.set_item("max_rank", r.max_rank)?;
    d.set_item("failures", r.failures)?;
    d.set_item("escalations", r.escalations)?;
    d.set_item("trials", r.trials)?;
    d.set_item("v", r.v)?;
    d.set_item("json", serde_json::to_string(&r).expect("reports serialize"))?;
    Ok(d)
}

#[pymodule]
pub fn trigonal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGradedTate>()?;
    m.add_class::<PySurfaceSpec>()?;
    m.add("RangeError", m.py().get_type::<RangeError>())?;
    m.add("ConsistencyError", m.py().get_type::<ConsistencyError>())?;
    m.add_function(wrap_pyfunction!(twisted_bm_config, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian_bm, m)?)?;
    m.add_function(wrap_pyfunction!(e1_page, m)?)?;
    m.add_function(wrap_pyfunction!(stable_cohomology_sections, m)?)?;
    m.add_function(wrap_pyfunction!(stratum_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(stable_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(stable_range, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_quotient_dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify_codimension, m)?)?;
    Ok(())
}
