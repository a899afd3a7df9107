//! Python bindings. Structured results cross the boundary as plain
//! dicts and lists, converted through JSON.

#![allow(clippy::useless_conversion)] // pyo3 0.22 macro expansion

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use twl_core as core;
use twl_core::{CellDescriptor, ContractionSequence, Error, MinorKind, VertexOrder};

fn err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py
        .import_bound("json")?
        .call_method1("loads", (text,))?
        .unbind())
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj
        .py()
        .import_bound("json")?
        .call_method1("dumps", (obj,))?
        .extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn seq(merges: Vec<[usize; 2]>) -> ContractionSequence {
    ContractionSequence::new(merges.into_iter().map(|[u, v]| (u, v)).collect())
}

fn order_of(g: &core::Graph, order: Option<Vec<usize>>) -> PyResult<VertexOrder> {
    let ord = match order {
        Some(p) => VertexOrder::new(p).map_err(err)?,
        None => VertexOrder::identity(g.n()),
    };
    ord.check_graph(g).map_err(err)?;
    Ok(ord)
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(module = "twl")]
#[derive(Clone)]
struct Graph {
    inner: core::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<[usize; 2]>) -> PyResult<Self> {
        let mut inner = core::Graph::new(n);
        for [u, v] in edges {
            inner.add_edge(u, v).map_err(err)?;
        }
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: core::Graph::parse(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.n(),
            self.inner.edges().len()
        )
    }
}

/// Certified instance: `graph`, `order`, `t` and the contraction `sequence`.
#[pyfunction]
fn gen_certified(py: Python<'_>, t: usize, n: usize, seed: u64) -> PyResult<(Graph, PyObject)> {
    let inst = core::gen_certified(t, n, seed).map_err(err)?;
    Ok((
        Graph {
            inner: inst.graph.clone(),
        },
        to_py(py, &inst.to_json())?,
    ))
}

#[pyfunction]
#[pyo3(signature = (graph, cap=10))]
fn twinwidth(py: Python<'_>, graph: &Graph, cap: usize) -> PyResult<PyObject> {
    let r = py
        .allow_threads(|| core::exact_twinwidth(&graph.inner, cap))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn verify_sequence(
    py: Python<'_>,
    graph: &Graph,
    merges: Vec<[usize; 2]>,
    d: usize,
) -> PyResult<PyObject> {
    let check = core::verify_sequence(&graph.inner, &seq(merges), d).map_err(err)?;
    to_py(py, &check)
}

#[pyfunction]
fn order_from_sequence(graph: &Graph, merges: Vec<[usize; 2]>) -> PyResult<Vec<usize>> {
    let ord = core::order_from_sequence(&graph.inner, &seq(merges)).map_err(err)?;
    Ok(ord.perm().to_vec())
}

/// Largest grid (`mixed=False`) or mixed minor of a 0/1 matrix.
#[pyfunction]
#[pyo3(signature = (rows, mixed=true, cap=usize::MAX))]
fn max_minor(py: Python<'_>, rows: Vec<Vec<bool>>, mixed: bool, cap: usize) -> PyResult<PyObject> {
    let m = core::BitMatrix::from_rows(&rows).map_err(err)?;
    let kind = if mixed {
        MinorKind::Mixed
    } else {
        MinorKind::Grid
    };
    to_py(py, &py.allow_threads(|| core::max_minor(&m, kind, cap)))
}

#[pyfunction]
#[pyo3(signature = (t, variant="ck"))]
fn pattern_constants(py: Python<'_>, t: u64, variant: &str) -> PyResult<PyObject> {
    let v: core::Variant = variant.parse().map_err(err)?;
    to_py(py, &core::PatternConstants::new(t, v).map_err(err)?)
}

#[pyfunction]
fn neighborhoods(py: Python<'_>, graph: &Graph, set: Vec<usize>) -> PyResult<PyObject> {
    let fam = core::neighborhoods_in(&graph.inner, &set).map_err(err)?;
    let reps = core::representative_set(&graph.inner, &set).map_err(err)?;
    to_py(
        py,
        &serde_json::json!({
            "size": fam.size(),
            "hasEmpty": fam.has_empty,
            "ratio": fam.ratio(),
            "traces": fam.traces,
            "representatives": reps,
        }),
    )
}

#[pyfunction]
fn vc_dimension(graph: &Graph) -> PyResult<usize> {
    core::vc_dimension(&graph.inner).map_err(err)
}

#[pyfunction]
fn shatter_profile(graph: &Graph) -> PyResult<Vec<usize>> {
    core::shatter_profile(&graph.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, set, theta, order=None))]
fn cell_partition(
    py: Python<'_>,
    graph: &Graph,
    set: Vec<usize>,
    theta: usize,
    order: Option<Vec<usize>>,
) -> PyResult<PyObject> {
    let ord = order_of(&graph.inner, order)?;
    let p = py
        .allow_threads(|| core::cell_partition(&graph.inner, &ord, &set, theta))
        .map_err(err)?;
    to_py(py, &p)
}

/// Recovers a cell's members from its descriptor dict.
#[pyfunction]
#[pyo3(signature = (graph, set, descriptor, order=None))]
fn decode_cell(
    graph: &Graph,
    set: Vec<usize>,
    descriptor: &Bound<'_, PyAny>,
    order: Option<Vec<usize>>,
) -> PyResult<Vec<usize>> {
    let ord = order_of(&graph.inner, order)?;
    let d: CellDescriptor = from_py(descriptor)?;
    core::decode_cell(&graph.inner, &ord, &set, &d).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, set, r, seed=0, order=None))]
fn cutting(
    py: Python<'_>,
    graph: &Graph,
    set: Vec<usize>,
    r: f64,
    seed: u64,
    order: Option<Vec<usize>>,
) -> PyResult<PyObject> {
    let ord = order_of(&graph.inner, order)?;
    let c = py
        .allow_threads(|| core::cutting(&graph.inner, &ord, &set, r, seed))
        .map_err(err)?;
    let mut out = c.summary();
    out["partition"] = serde_json::json!(c.parts);
    out["crossingCounts"] = serde_json::json!(c.crossing_counts);
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (graph, eps, seed=0, order=None))]
fn regularity(
    py: Python<'_>,
    graph: &Graph,
    eps: f64,
    seed: u64,
    order: Option<Vec<usize>>,
) -> PyResult<PyObject> {
    let ord = order_of(&graph.inner, order)?;
    let cfg = core::SamplingConfig::default();
    let r = py
        .allow_threads(|| core::regularity_with(&graph.inner, &ord, eps, seed, &cfg))
        .map_err(err)?;
    let mut out = r.summary();
    out["partition"] = serde_json::json!(r.parts);
    to_py(py, &out)
}

#[pymodule]
fn twl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(gen_certified, m)?)?;
    m.add_function(wrap_pyfunction!(twinwidth, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(order_from_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(max_minor, m)?)?;
    m.add_function(wrap_pyfunction!(pattern_constants, m)?)?;
    m.add_function(wrap_pyfunction!(neighborhoods, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(shatter_profile, m)?)?;
    m.add_function(wrap_pyfunction!(cell_partition, m)?)?;
    m.add_function(wrap_pyfunction!(decode_cell, m)?)?;
    m.add_function(wrap_pyfunction!(cutting, m)?)?;
    m.add_function(wrap_pyfunction!(regularity, m)?)?;
    Ok(())
}
