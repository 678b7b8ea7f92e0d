//! Python bindings. Structured values cross the boundary as the same JSON
//! documents the CLI reads and writes.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use carathe::caratheodory::{self, SuiteOptions};
use carathe::geomkernel::predicates;
use carathe::scomplex::SComplex;
use carathe::tverberg;
use carathe::{Error, VSet};

create_exception!(carathe_py, NoSelectionError, PyException);
create_exception!(carathe_py, NoPartitionError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NoSelection(_) => NoSelectionError::new_err(e.to_string()),
        Error::NoPartition(_) => NoPartitionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A point configuration with rational coordinates, none at the origin.
#[pyclass(name = "PointConfig", frozen)]
struct PyPointConfig(carathe::PointConfig);

impl PyPointConfig {
    fn subset(&self, u: Option<Vec<usize>>) -> PyResult<VSet> {
        match u {
            None => Ok(self.0.universe()),
            Some(u) => {
                if let Some(&v) = u.iter().find(|&&v| v >= self.0.len()) {
                    return Err(PyValueError::new_err(format!("vertex {v} is out of range")));
                }
                Ok(VSet::from_indices(u))
            }
        }
    }
}

#[pymethods]
impl PyPointConfig {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        carathe::PointConfig::from_json(s).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Convex coefficients `{vertex: "p/q"}` of the origin over `u`, or `None`.
    #[pyo3(signature = (u=None))]
    fn in_conv(&self, u: Option<Vec<usize>>) -> PyResult<Option<String>> {
        let c = predicates::in_conv(&self.0, self.subset(u)?).map_err(py_err)?;
        c.map(|c| to_json(&c)).transpose()
    }

    #[pyo3(signature = (u=None))]
    fn in_relint(&self, u: Option<Vec<usize>>) -> PyResult<bool> {
        predicates::in_relint(&self.0, self.subset(u)?).map_err(py_err)
    }

    #[pyo3(signature = (u=None))]
    fn in_interior(&self, u: Option<Vec<usize>>) -> PyResult<bool> {
        predicates::in_interior(&self.0, self.subset(u)?).map_err(py_err)
    }

    /// The zero-avoiding complex, as complex JSON.
    fn zero_avoiding(&self) -> String {
        SComplex::zero_avoiding(&self.0).to_json()
    }

    /// Alexander dual of the zero-avoiding complex, as complex JSON.
    fn zero_avoiding_dual(&self) -> String {
        SComplex::zero_avoiding(&self.0).alexander_dual().to_json()
    }

    /// Lemma rows for the subset `u`, as a JSON list.
    fn lemma_suite(&self, u: Vec<usize>) -> PyResult<String> {
        let rows = caratheodory::lemma_suite(&self.0, self.subset(Some(u))?, SuiteOptions::default()).map_err(py_err)?;
        to_json(&rows)
    }
}

/// Reduced Betti numbers of a complex given as JSON, from degree -1.
#[pyfunction]
fn betti(complex_json: &str) -> PyResult<Vec<usize>> {
    let k = SComplex::from_json(complex_json).map_err(py_err)?;
    let b = carathe::homology::betti(&k).map_err(py_err)?;
    Ok(b.degrees().map(|(_, v)| v).collect())
}

#[pyfunction]
fn alexander_dual(complex_json: &str) -> PyResult<String> {
    Ok(SComplex::from_json(complex_json).map_err(py_err)?.alexander_dual().to_json())
}

/// Hypothesis report for an instance, as JSON.
#[pyfunction]
fn check_hypotheses(instance_json: &str) -> PyResult<String> {
    let inst = caratheodory::Instance::from_json(instance_json).map_err(py_err)?;
    to_json(&caratheodory::check_hypotheses(&inst))
}

/// Certificate JSON for an instance; raises `NoSelectionError` when none exists.
#[pyfunction]
fn solve(instance_json: &str) -> PyResult<String> {
    let inst = caratheodory::Instance::from_json(instance_json).map_err(py_err)?;
    let cert = caratheodory::solve(&inst).map_err(py_err)?;
    to_json(&cert)
}

#[pyfunction]
fn verify_certificate(instance_json: &str, certificate_json: &str) -> PyResult<bool> {
    let inst = caratheodory::Instance::from_json(instance_json).map_err(py_err)?;
    let cert = serde_json::from_str(certificate_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(caratheodory::verify_certificate(&inst, &cert))
}

/// Covering-scheme report for an instance, as JSON.
#[pyfunction]
fn covering_check(instance_json: &str) -> PyResult<String> {
    let inst = caratheodory::Instance::from_json(instance_json).map_err(py_err)?;
    to_json(&caratheodory::covering_check(&inst).map_err(py_err)?)
}

/// Constrained Tverberg search. `edges` are 1-based pairs `(i, j)` of `L`;
/// the full `[r] * [r]` is used when absent.
#[pyfunction]
#[pyo3(signature = (config, r, edges=None, anchors=(0, 1)))]
fn solve_tverberg(config: &PyPointConfig, r: usize, edges: Option<Vec<(usize, usize)>>, anchors: (usize, usize)) -> PyResult<String> {
    let l = match edges {
        Some(e) => tverberg::pair_complex_from_edges(r, &e).map_err(py_err)?,
        None => tverberg::full_pair_complex(r),
    };
    let sol = tverberg::solve_tverberg(&config.0, r, &l, anchors).map_err(py_err)?;
    Ok(sol.to_json())
}

#[pymodule]
fn carathe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPointConfig>()?;
    m.add_function(wrap_pyfunction!(betti, m)?)?;
    m.add_function(wrap_pyfunction!(alexander_dual, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypotheses, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(covering_check, m)?)?;
    m.add_function(wrap_pyfunction!(solve_tverberg, m)?)?;
    m.add("NoSelectionError", m.py().get_type::<NoSelectionError>())?;
    m.add("NoPartitionError", m.py().get_type::<NoPartitionError>())?;
    Ok(())
}
