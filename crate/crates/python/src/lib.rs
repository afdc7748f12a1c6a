//! Python bindings: codes, the search, neighbors, equivalence and the
//! code-file format.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sdcode_core::code::{CodeType, LinearCode};
use sdcode_core::equivalence;
use sdcode_core::gamma::build_tree;
use sdcode_core::gf2::BitMatrix;
use sdcode_core::mutable::MuTable;
use sdcode_core::neighbors::neighbors_through_kernel;
use sdcode_core::oracle;
use sdcode_core::persist::codefile;
use sdcode_core::search::{run_search, Order, SearchConfig, SearchReport};
use sdcode_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::Config { .. }
        | Error::InvalidParameters(_)
        | Error::Precondition(_)
        | Error::LengthMismatch { .. }
        | Error::DimensionGuard { .. }
        | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_type(s: &str) -> PyResult<CodeType> {
    s.parse().map_err(to_py)
}

/// A binary linear code given by generator rows such as `"1100"`.
#[pyclass(name = "Code", module = "sdcode", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCode {
    inner: LinearCode,
}

impl From<LinearCode> for PyCode {
    fn from(inner: LinearCode) -> Self {
        PyCode { inner }
    }
}

#[pymethods]
impl PyCode {
    #[new]
    fn new(rows: Vec<String>) -> PyResult<Self> {
        LinearCode::parse(&rows).map(PyCode::from).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn rows(&self) -> Vec<String> {
        self.inner.generator().rows().iter().map(|r| r.to_string()).collect()
    }

    fn is_self_dual(&self) -> bool {
        self.inner.is_self_dual()
    }

    /// `"I"`, `"II"` or `"linear"`.
    fn code_type(&self) -> &'static str {
        self.inner.classify_type().tag()
    }

    fn min_distance(&self) -> PyResult<usize> {
        self.inner
            .min_distance()
            .ok_or_else(|| PyValueError::new_err("dimension too large to enumerate"))
    }

    fn weight_enumerator(&self) -> PyResult<Vec<u64>> {
        self.inner.weight_enumerator().map(<[u64]>::to_vec).map_err(to_py)
    }

    /// Standard-form code and the column permutation that produced it.
    fn standard_form(&self) -> (PyCode, Vec<usize>) {
        let (c, p) = self.inner.standard_form();
        (c.into(), p)
    }

    fn dual(&self) -> PyCode {
        self.inner.dual().into()
    }

    fn permute(&self, perm: Vec<usize>) -> PyResult<PyCode> {
        let mut seen = vec![false; self.inner.n()];
        if perm.len() != seen.len() || !perm.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true)) {
            return Err(PyValueError::new_err("not a permutation of the coordinates"));
        }
        Ok(self.inner.permute_columns(&perm).into())
    }

    fn __repr__(&self) -> String {
        format!("Code(n={}, k={}, rows={:?})", self.inner.n(), self.inner.k(), self.rows())
    }
}

fn codes(list: &[PyCode]) -> Vec<LinearCode> {
    list.iter().map(|c| c.inner.clone()).collect()
}

#[pyfunction]
fn distance_bound(n: usize, code_type: &str) -> PyResult<usize> {
    sdcode_core::distance_bound(n, parse_type(code_type)?).map_err(to_py)
}

#[pyfunction]
fn mass_formula(n: usize) -> u128 {
    oracle::mass_formula(n)
}

/// Admissible mu values keyed by `(w1, w2)`.
#[pyfunction]
fn mu_table(n: usize, k: usize, d: usize, code_type: &str) -> PyResult<BTreeMap<(usize, usize), Vec<usize>>> {
    let table = MuTable::build(n, k, d, parse_type(code_type)?).map_err(to_py)?;
    Ok(table.cells().map(|(key, v)| (key, v.to_vec())).collect())
}

fn report_dict<'py>(py: Python<'py>, r: &SearchReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("starters", r.starters)?;
    d.set_item("nodes_expanded", r.nodes_expanded)?;
    d.set_item("candidates_examined", r.candidates_examined)?;
    d.set_item("leaves", r.leaves)?;
    d.set_item("yields", r.yields)?;
    d.set_item("pruned", r.pruned.clone())?;
    d.set_item("limit_reached", r.limit_reached.map(|l| l.name()))?;
    d.set_item("elapsed_secs", r.elapsed_secs)?;
    Ok(d)
}

/// Runs a search; returns the codes and the report counters.
#[pyfunction]
#[pyo3(signature = (n, k, d, code_type, limit=None, order="desc", max_row_weight=None, parallel=false))]
#[allow(clippy::too_many_arguments)]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    d: usize,
    code_type: &str,
    limit: Option<u64>,
    order: &str,
    max_row_weight: Option<usize>,
    parallel: bool,
) -> PyResult<(Vec<PyCode>, Bound<'py, PyDict>)> {
    let mut config = SearchConfig::new(n, k, d, parse_type(code_type)?);
    config.strategy.limits.max_solutions = limit;
    config.strategy.order = order.parse::<Order>().map_err(to_py)?;
    config.strategy.max_row_weight = max_row_weight;
    config.strategy.parallel = parallel;
    let outcome = py.detach(|| run_search(&config)).map_err(to_py)?;
    let report = report_dict(py, &outcome.report)?;
    Ok((outcome.codes.into_iter().map(PyCode::from).collect(), report))
}

#[pyfunction]
fn neighbors(code: &PyCode) -> PyResult<(PyCode, PyCode)> {
    let pair = neighbors_through_kernel(&code.inner).map_err(to_py)?;
    Ok((pair.n1.into(), pair.n2.into()))
}

#[pyfunction]
fn are_equivalent(a: &PyCode, b: &PyCode) -> PyResult<bool> {
    equivalence::are_equivalent(&a.inner, &b.inner).map_err(to_py)
}

#[pyfunction]
fn automorphism_group_order(code: &PyCode) -> PyResult<u128> {
    equivalence::automorphism_group_order(&code.inner).map_err(to_py)
}

/// One representative per equivalence class, in first-seen order.
#[pyfunction]
fn dedupe(py: Python<'_>, codes_in: Vec<PyCode>) -> PyResult<Vec<PyCode>> {
    let list = codes(&codes_in);
    let reps = py.detach(|| equivalence::dedupe(list)).map_err(to_py)?;
    Ok(reps.into_iter().map(PyCode::from).collect())
}

/// Leaves of the partition tree of a row-weight-sorted matrix, as 0-based
/// column groups.
#[pyfunction]
fn partition_leaves(rows: Vec<String>) -> PyResult<Vec<Vec<usize>>> {
    let a = BitMatrix::parse_rows(&rows).map_err(to_py)?;
    Ok(build_tree(&a).map_err(to_py)?.leaves())
}

#[pyfunction]
fn load_codes(path: PathBuf) -> PyResult<Vec<PyCode>> {
    Ok(codefile::load_codes(&path).map_err(to_py)?.into_iter().map(PyCode::from).collect())
}

#[pyfunction]
fn save_codes(path: PathBuf, codes_out: Vec<PyCode>) -> PyResult<()> {
    codefile::write_codes(&path, &codes(&codes_out)).map_err(to_py)
}

/// Equivalence classes of self-dual codes of length `n <= 18` as tuples
/// `(representative, class size, minimum distance, type)`.
#[pyfunction]
fn oracle_classes(py: Python<'_>, n: usize) -> PyResult<Vec<(PyCode, u128, usize, &'static str)>> {
    let classes = py
        .detach(|| {
            if n <= oracle::DIRECT_LIMIT {
                oracle::enumerate_all_self_dual(n).map(|c| c.classes)
            } else {
                oracle::neighbor_closure(n)
            }
        })
        .map_err(to_py)?;
    Ok(classes
        .into_iter()
        .map(|c| (c.representative.into(), c.size, c.min_distance, c.ty.tag()))
        .collect())
}

#[pymodule]
fn sdcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(distance_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mass_formula, m)?)?;
    m.add_function(wrap_pyfunction!(mu_table, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(are_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(automorphism_group_order, m)?)?;
    m.add_function(wrap_pyfunction!(dedupe, m)?)?;
    m.add_function(wrap_pyfunction!(partition_leaves, m)?)?;
    m.add_function(wrap_pyfunction!(load_codes, m)?)?;
    m.add_function(wrap_pyfunction!(save_codes, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_classes, m)?)?;
    Ok(())
}
