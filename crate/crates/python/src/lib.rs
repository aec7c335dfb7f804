//! Python bindings for `sumsq-core`.
//!
//! Structured results (reports, witnesses, verification records) come back as
//! plain dicts with the same field names as the CLI's JSON records; integers
//! that may exceed 64 bits are decimal strings there, exactly as on the CLI.

// pyo3 0.22's argument-extraction macros convert PyErr into itself.
#![allow(clippy::useless_conversion)]

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyType;
use serde::Serialize;
use sumsq_core::{arith, families, local, search, two_squares, Error};

create_exception!(
    sumsq,
    TheoremViolation,
    PyRuntimeError,
    "A witness failed to re-verify."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::TheoremViolation(msg) => TheoremViolation::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py
        .import_bound("json")?
        .call_method1("loads", (text,))?
        .unbind())
}

fn class_or_any(z_class: Option<ResidueClass>) -> search::ResidueClass {
    z_class.map_or(search::ResidueClass::ANY, |c| c.0)
}

/// The set of integers congruent to `r` mod `m`.
#[pyclass(frozen, eq, hash, module = "sumsq")]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct ResidueClass(search::ResidueClass);

#[pymethods]
impl ResidueClass {
    #[new]
    fn new(r: u64, m: u64) -> PyResult<Self> {
        search::ResidueClass::new(r, m).map(Self).map_err(py_err)
    }

    /// Parses `"r/m"`.
    #[classmethod]
    fn parse(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(py_err)
    }

    #[getter]
    fn r(&self) -> u64 {
        self.0.r()
    }

    #[getter]
    fn m(&self) -> u64 {
        self.0.m()
    }

    fn __contains__(&self, z: i128) -> bool {
        self.0.contains(z)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ResidueClass({}, {})", self.0.r(), self.0.m())
    }
}

/// One exceptional target together with its z-class and positivity rule.
#[pyclass(frozen, module = "sumsq")]
#[derive(Clone)]
struct FamilyTarget(families::FamilyTarget);

#[pymethods]
impl FamilyTarget {
    #[new]
    #[pyo3(signature = (family, k, p, cofactor_n = 1))]
    fn new(family: &str, k: u32, p: u64, cofactor_n: u64) -> PyResult<Self> {
        let family = family.parse().map_err(py_err)?;
        families::FamilyTarget::new(family, k, p, cofactor_n)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn family(&self) -> String {
        self.0.family.to_string()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p
    }

    #[getter]
    fn cofactor_n(&self) -> u64 {
        self.0.cofactor_n
    }

    #[getter]
    fn target(&self) -> u128 {
        self.0.target
    }

    #[getter]
    fn z_class(&self) -> ResidueClass {
        ResidueClass(self.0.z_class)
    }

    #[getter]
    fn positivity(&self) -> bool {
        self.0.positivity
    }

    /// Inclusive `(z_min, z_max)` checked by `verify` and `witnesses`.
    fn acceptance_window(&self) -> (i128, i128) {
        self.0.acceptance_window()
    }

    /// Admissible z values in the acceptance window.
    fn window_z(&self) -> Vec<i128> {
        self.0.window_z().collect()
    }

    /// Exhaustive search over the acceptance window.
    fn verify(&self, py: Python<'_>) -> PyResult<PyObject> {
        let spec = self.0.search_spec().map_err(py_err)?;
        to_py(py, &search::verify_none(&spec).map_err(py_err)?)
    }

    fn witness(&self, py: Python<'_>, z: i128) -> PyResult<PyObject> {
        to_py(py, &families::witness(&self.0, z).map_err(py_err)?)
    }

    #[pyo3(signature = (bound = 100, max_level = 12))]
    fn local_report(&self, py: Python<'_>, bound: u64, max_level: u32) -> PyResult<PyObject> {
        let t = &self.0;
        to_py(
            py,
            &local::local_report(t.target, t.k, t.z_class, bound, max_level).map_err(py_err)?,
        )
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "FamilyTarget({:?}, k={}, p={}, cofactor_n={}, target={})",
            self.0.family.to_string(),
            self.0.k,
            self.0.p,
            self.0.cofactor_n,
            self.0.target
        )
    }
}

#[pyfunction]
fn is_prime(n: u128) -> PyResult<bool> {
    arith::is_prime(n).map_err(py_err)
}

/// Prime factorization as `[(prime, exponent), ...]` in ascending order.
#[pyfunction]
fn factor(n: u128) -> PyResult<Vec<(u128, u32)>> {
    Ok(arith::factor(n).map_err(py_err)?.factors().to_vec())
}

#[pyfunction]
fn valuation(n: u128, q: u128) -> PyResult<u32> {
    arith::valuation(n, q).map_err(py_err)
}

#[pyfunction]
fn integer_nth_root(n: u128, k: u32) -> PyResult<u128> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be positive"));
    }
    Ok(arith::integer_nth_root(n, k))
}

#[pyfunction]
fn primes_in_ap(limit: u64, r: u64, m: u64) -> PyResult<Vec<u64>> {
    Ok(arith::primes_in_ap(limit, r, m).map_err(py_err)?.collect())
}

#[pyfunction]
fn is_sum_of_two_squares(n: u128) -> PyResult<bool> {
    two_squares::is_sum_of_two_squares(n).map_err(py_err)
}

#[pyfunction]
fn two_square_representations(n: u64) -> PyResult<Vec<(u64, u64)>> {
    two_squares::two_square_representations(n).map_err(py_err)
}

/// Every `(x, y, z)` with `x <= y` and `z` in the window and class.
#[pyfunction]
#[pyo3(signature = (n, k, z_min, z_max, z_class = None, positive = false))]
fn find_representations(
    n: u128,
    k: u32,
    z_min: i128,
    z_max: i128,
    z_class: Option<ResidueClass>,
    positive: bool,
) -> PyResult<Vec<(u64, u64, i128)>> {
    let spec = search::SearchSpec::new(n, k, class_or_any(z_class), z_min, z_max, positive)
        .map_err(py_err)?;
    Ok(search::find_representations(&spec)
        .map_err(py_err)?
        .into_iter()
        .map(|r| (r.x, r.y, r.z))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (n, k, z_min, z_max, z_class = None, positive = false))]
fn verify_none(
    py: Python<'_>,
    n: u128,
    k: u32,
    z_min: i128,
    z_max: i128,
    z_class: Option<ResidueClass>,
    positive: bool,
) -> PyResult<PyObject> {
    let spec = search::SearchSpec::new(n, k, class_or_any(z_class), z_min, z_max, positive)
        .map_err(py_err)?;
    to_py(py, &search::verify_none(&spec).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (n, k, q, z_class = None, max_level = 12))]
fn is_locally_solvable_at(
    py: Python<'_>,
    n: u128,
    k: u32,
    q: u128,
    z_class: Option<ResidueClass>,
    max_level: u32,
) -> PyResult<PyObject> {
    let verdict =
        local::is_locally_solvable_at(n, k, class_or_any(z_class), q, max_level).map_err(py_err)?;
    to_py(py, &verdict)
}

#[pyfunction]
#[pyo3(signature = (n, k, z_class = None, bound = 100, max_level = 12))]
fn local_report(
    py: Python<'_>,
    n: u128,
    k: u32,
    z_class: Option<ResidueClass>,
    bound: u64,
    max_level: u32,
) -> PyResult<PyObject> {
    let report =
        local::local_report(n, k, class_or_any(z_class), bound, max_level).map_err(py_err)?;
    to_py(py, &report)
}

/// All targets of `family` (`"thm1"`, `"thm2"`, `"thm3"`) up to `limit`, ascending.
#[pyfunction]
fn generate(family: &str, k: u32, limit: u128) -> PyResult<Vec<FamilyTarget>> {
    let family = family.parse().map_err(py_err)?;
    Ok(families::generate(family, k, limit)
        .map_err(py_err)?
        .into_iter()
        .map(FamilyTarget)
        .collect())
}

#[pyfunction]
fn witness(py: Python<'_>, target: &FamilyTarget, z: i128) -> PyResult<PyObject> {
    target.witness(py, z)
}

#[pyfunction]
#[pyo3(signature = (limit, require_1_mod_8 = false))]
fn landau_count(limit: u64, require_1_mod_8: bool) -> PyResult<u64> {
    families::landau_count(limit, require_1_mod_8).map_err(py_err)
}

#[pyfunction]
fn density_report(py: Python<'_>, family: &str, k: u32, limits: Vec<u128>) -> PyResult<PyObject> {
    let family = family.parse().map_err(py_err)?;
    to_py(
        py,
        &families::density_report(family, k, &limits).map_err(py_err)?,
    )
}

#[pymodule]
#[pyo3(name = "sumsq")]
pub fn sumsq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add(
        "TheoremViolation",
        m.py().get_type_bound::<TheoremViolation>(),
    )?;
    m.add_class::<ResidueClass>()?;
    m.add_class::<FamilyTarget>()?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    m.add_function(wrap_pyfunction!(integer_nth_root, m)?)?;
    m.add_function(wrap_pyfunction!(primes_in_ap, m)?)?;
    m.add_function(wrap_pyfunction!(is_sum_of_two_squares, m)?)?;
    m.add_function(wrap_pyfunction!(two_square_representations, m)?)?;
    m.add_function(wrap_pyfunction!(find_representations, m)?)?;
    m.add_function(wrap_pyfunction!(verify_none, m)?)?;
    m.add_function(wrap_pyfunction!(is_locally_solvable_at, m)?)?;
    m.add_function(wrap_pyfunction!(local_report, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(landau_count, m)?)?;
    m.add_function(wrap_pyfunction!(density_report, m)?)?;
    Ok(())
}
