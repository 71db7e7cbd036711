use std::collections::BTreeMap;

use kreingraph::harness::{run_suite, Suite, SuiteConfig};
use kreingraph::surgery;
use kreingraph::{ConditionSpec, MetricGraph, PotentialPiece};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: kreingraph::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.code()))
}

fn conditions(kind: &str, boundary: Option<Vec<String>>, delta: Option<BTreeMap<String, f64>>) -> PyResult<ConditionSpec> {
    Ok(match kind {
        "dirichlet" => ConditionSpec::Dirichlet,
        "standard" => ConditionSpec::Standard,
        "krein" => ConditionSpec::Krein,
        "krein-subset" | "krein_subset" => ConditionSpec::krein_subset(boundary.unwrap_or_default()),
        "delta" => ConditionSpec::delta(delta.unwrap_or_default()),
        other => return Err(PyValueError::new_err(format!("unknown conditions `{other}`"))),
    })
}

/// A metric graph with piecewise-constant edge potentials.
#[pyclass(name = "Graph", module = "pykreingraph", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: MetricGraph,
}

impl From<MetricGraph> for PyGraph {
    fn from(inner: MetricGraph) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyGraph {
    /// Parses the JSON graph document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        kreingraph::parse_graph(text).map(Self::from).map_err(err)
    }

    /// Builds a graph with `q ≡ 0` from `(u, v, length)` triples; edges are
    /// named `e0, e1, ...`.
    #[staticmethod]
    fn from_lengths(vertices: Vec<String>, edges: Vec<(String, String, f64)>) -> PyResult<Self> {
        let v: Vec<&str> = vertices.iter().map(String::as_str).collect();
        let e: Vec<(&str, &str, f64)> = edges.iter().map(|(a, b, l)| (a.as_str(), b.as_str(), *l)).collect();
        MetricGraph::from_lengths(&v, &e).map(Self::from).map_err(err)
    }

    fn to_json(&self) -> String {
        kreingraph::serialize_graph(&self.inner)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String, String, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.id.clone(), e.u.clone(), e.v.clone(), e.length))
            .collect()
    }

    fn total_length(&self) -> f64 {
        kreingraph::total_length(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={}, length={})",
            self.inner.vertex_count(),
            self.inner.edge_count(),
            kreingraph::total_length(&self.inner)
        )
    }
}

/// Eigenvalues up to `lambda_max` as `(value, multiplicity)` pairs.
#[pyfunction]
#[pyo3(signature = (graph, lambda_max, conditions="krein", boundary=None, delta=None))]
fn spectrum(
    graph: &PyGraph,
    lambda_max: f64,
    conditions: &str,
    boundary: Option<Vec<String>>,
    delta: Option<BTreeMap<String, f64>>,
) -> PyResult<Vec<(f64, usize)>> {
    let spec = self::conditions(conditions, boundary, delta)?;
    Ok(kreingraph::eigenvalues(&graph.inner, &spec, lambda_max).map_err(err)?.pairs)
}

/// Number of eigenvalues `≤ lambda`, with multiplicity.
#[pyfunction]
#[pyo3(signature = (graph, lambda_, conditions="krein", boundary=None, delta=None))]
fn count(
    graph: &PyGraph,
    lambda_: f64,
    conditions: &str,
    boundary: Option<Vec<String>>,
    delta: Option<BTreeMap<String, f64>>,
) -> PyResult<usize> {
    let spec = self::conditions(conditions, boundary, delta)?;
    kreingraph::counting_function(&graph.inner, &spec, lambda_).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, conditions="krein", boundary=None, delta=None))]
fn kernel_dimension(
    graph: &PyGraph,
    conditions: &str,
    boundary: Option<Vec<String>>,
    delta: Option<BTreeMap<String, f64>>,
) -> PyResult<usize> {
    let spec = self::conditions(conditions, boundary, delta)?;
    kreingraph::kernel_dimension(&graph.inner, &spec).map_err(err)
}

/// `M(λ)` as a list of rows, in vertex order.
#[pyfunction]
fn weyl_matrix(graph: &PyGraph, lambda_: f64) -> PyResult<Vec<Vec<f64>>> {
    let m = kreingraph::weyl_matrix(&graph.inner, lambda_).map_err(err)?.entries;
    Ok(m.row_iter().map(|r| r.iter().copied().collect()).collect())
}

#[pyfunction]
fn glue_vertices(graph: &PyGraph, vertices: Vec<String>) -> PyResult<PyGraph> {
    Ok(surgery::glue_vertices(&graph.inner, &vertices).map_err(err)?.graph.into())
}

#[pyfunction]
fn insert_degree2(graph: &PyGraph, edge: &str, position: f64) -> PyResult<PyGraph> {
    Ok(surgery::insert_degree2(&graph.inner, edge, position).map_err(err)?.graph.into())
}

#[pyfunction]
fn remove_degree2(graph: &PyGraph, vertex: &str) -> PyResult<PyGraph> {
    Ok(surgery::remove_degree2(&graph.inner, vertex).map_err(err)?.graph.into())
}

#[pyfunction]
fn lengthen_edge(graph: &PyGraph, edge: &str, alpha: f64) -> PyResult<PyGraph> {
    Ok(surgery::lengthen_edge(&graph.inner, edge, alpha).map_err(err)?.graph.into())
}

#[pyfunction]
fn scale_graph(graph: &PyGraph, alpha: f64) -> PyResult<PyGraph> {
    Ok(surgery::scale_graph(&graph.inner, alpha).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (graph, other, pairing))]
fn attach_graph(graph: &PyGraph, other: &PyGraph, pairing: Vec<(String, String)>) -> PyResult<PyGraph> {
    Ok(surgery::attach_graph(&graph.inner, &other.inner, &pairing).map_err(err)?.graph.into())
}

/// Adds an edge between `u` and `v` carrying the constant potential `q`.
#[pyfunction]
#[pyo3(signature = (graph, u, v, length, q=0.0))]
fn insert_edge(graph: &PyGraph, u: &str, v: &str, length: f64, q: f64) -> PyResult<PyGraph> {
    let pieces = vec![PotentialPiece { len: length, q }];
    Ok(surgery::insert_edge(&graph.inner, u, v, length, pieces).map_err(err)?.graph.into())
}

/// Runs a verification suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, trials=50, seed=0, j_max=8))]
fn verify(suite: &str, trials: usize, seed: u64, j_max: usize) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(err)?;
    let cfg = SuiteConfig {
        trials,
        seed,
        j_max,
        ..SuiteConfig::default()
    };
    serde_json::to_string(&run_suite(suite, &cfg)).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Rayleigh–Ritz upper bounds for the first `j_max` positive Krein
/// eigenvalues.
#[pyfunction]
#[pyo3(signature = (graph, modes=40, j_max=5))]
fn rayleigh_ritz(graph: &PyGraph, modes: usize, j_max: usize) -> PyResult<Vec<f64>> {
    kreingraph::rayleigh_ritz(&graph.inner, modes, j_max).map_err(err)
}

/// `(λ₁⁺, bound, margin)` of the isoperimetric inequality.
#[pyfunction]
fn isoperimetric(graph: &PyGraph) -> PyResult<(f64, f64, f64)> {
    let r = kreingraph::isoperimetric_check(&graph.inner).map_err(err)?;
    Ok((r.lambda1_plus, r.bound, r.margin))
}

#[pymodule]
pub fn pykreingraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(glue_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(insert_degree2, m)?)?;
    m.add_function(wrap_pyfunction!(remove_degree2, m)?)?;
    m.add_function(wrap_pyfunction!(lengthen_edge, m)?)?;
    m.add_function(wrap_pyfunction!(scale_graph, m)?)?;
    m.add_function(wrap_pyfunction!(attach_graph, m)?)?;
    m.add_function(wrap_pyfunction!(insert_edge, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_ritz, m)?)?;
    m.add_function(wrap_pyfunction!(isoperimetric, m)?)?;
    Ok(())
}
