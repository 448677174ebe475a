//! Python bindings. Vertices are 0-based on this side.

use std::collections::BTreeMap;

use pmcsolve_core::engine::{Mode, SolveOptions};
use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::graph::{detect_format, to_pace};
use pmcsolve_core::oracle::brute_force_problem;
use pmcsolve_core::problems::{check_class_caveats, problem_catalog, resolve_problem, solve_problem, ProblemSpec};
use pmcsolve_core::triangulation::{enumerate_minimal_separators, enumerate_pmcs, Budgets};
use pmcsolve_core::{parse_graph, Error, GraphFormat, VertexSet};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(pmcsolve, BudgetExceeded, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn ids(s: &VertexSet) -> Vec<usize> {
    s.iter().collect()
}

#[pyclass(name = "Graph", frozen)]
pub struct PyGraph {
    inner: pmcsolve_core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: pmcsolve_core::Graph::from_edges(n, &edges).map_err(to_py)? })
    }

    /// Parse PACE `.gr` text or a 1-indexed edge list.
    #[staticmethod]
    #[pyo3(signature = (text, format = None))]
    fn parse(text: &str, format: Option<&str>) -> PyResult<Self> {
        let format = match format {
            Some(f) => f.parse::<GraphFormat>().map_err(to_py)?,
            None => detect_format(text),
        };
        Ok(PyGraph { inner: parse_graph(text, format).map_err(to_py)? })
    }

    /// A generated graph, e.g. `Graph.generate("gnp:n=20,p=0.3", seed=1)`.
    #[staticmethod]
    #[pyo3(signature = (kind, seed = 0))]
    fn generate(kind: &str, seed: u64) -> PyResult<Self> {
        let kind: GraphKind = kind.parse().map_err(to_py)?;
        Ok(PyGraph { inner: gen_graph(&kind, seed).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn to_pace(&self) -> String {
        to_pace(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

#[pyclass(name = "Solution", frozen, get_all)]
pub struct PySolution {
    value: f64,
    f: Vec<usize>,
    x: Vec<usize>,
    stats: BTreeMap<String, u64>,
}

#[pymethods]
impl PySolution {
    fn __repr__(&self) -> String {
        format!("Solution(value={}, f={:?}, x={:?})", self.value, self.f, self.x)
    }
}

#[allow(clippy::too_many_arguments)]
fn build_spec(
    problem: &str,
    t: Option<usize>,
    mode: Option<&str>,
    terminals: Option<Vec<usize>>,
    weights: Option<Vec<f64>>,
    annotations: Option<Vec<usize>>,
    exact_size: Option<usize>,
) -> PyResult<ProblemSpec> {
    let mut spec = resolve_problem(problem).map_err(to_py)?;
    if let Some(ts) = terminals {
        spec = spec.with_terminals(ts.into_iter().collect()).map_err(to_py)?;
    }
    if let Some(t) = t {
        spec.t = t;
    }
    if let Some(mode) = mode {
        spec.mode = mode.parse::<Mode>().map_err(to_py)?;
    }
    spec.weights = weights;
    if let Some(a) = annotations {
        spec.annotations.union_with(&a.into_iter().collect());
    }
    spec.exact_size = exact_size;
    Ok(spec)
}

/// Optimal solution, or `None` when no feasible solution exists.
#[pyfunction]
#[pyo3(signature = (graph, problem, *, t = None, mode = None, terminals = None, weights = None,
                    annotations = None, exact_size = None, budget_separators = None, budget_pmcs = None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    graph: &PyGraph,
    problem: &str,
    t: Option<usize>,
    mode: Option<&str>,
    terminals: Option<Vec<usize>>,
    weights: Option<Vec<f64>>,
    annotations: Option<Vec<usize>>,
    exact_size: Option<usize>,
    budget_separators: Option<usize>,
    budget_pmcs: Option<usize>,
) -> PyResult<Option<PySolution>> {
    let spec = build_spec(problem, t, mode, terminals, weights, annotations, exact_size)?;
    let defaults = Budgets::default();
    let budgets = Budgets {
        separators: budget_separators.unwrap_or(defaults.separators),
        pmcs: budget_pmcs.unwrap_or(defaults.pmcs),
    };
    let opts = SolveOptions { budgets, record_tables: false };
    let g = &graph.inner;
    match py.detach(|| solve_problem(g, &spec, &opts)) {
        Ok(s) => {
            let stats = [
                ("separators", s.stats.separators as u64),
                ("pmcs", s.stats.pmcs as u64),
                ("blocks", s.stats.blocks as u64),
                ("good_triples", s.stats.good_triples as u64),
                ("dp_keys", s.stats.dp_keys as u64),
                ("ms", s.stats.ms),
            ];
            Ok(Some(PySolution {
                value: s.value,
                f: ids(&s.f),
                x: ids(&s.x),
                stats: stats.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            }))
        }
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(to_py(e)),
    }
}

/// Exhaustive reference value for small graphs, or `None` if infeasible.
#[pyfunction]
#[pyo3(signature = (graph, problem, *, t = None, mode = None, terminals = None, weights = None,
                    annotations = None, exact_size = None))]
#[allow(clippy::too_many_arguments)]
fn brute_force(
    py: Python<'_>,
    graph: &PyGraph,
    problem: &str,
    t: Option<usize>,
    mode: Option<&str>,
    terminals: Option<Vec<usize>>,
    weights: Option<Vec<f64>>,
    annotations: Option<Vec<usize>>,
    exact_size: Option<usize>,
) -> PyResult<Option<f64>> {
    let spec = build_spec(problem, t, mode, terminals, weights, annotations, exact_size)?;
    let g = &graph.inner;
    match py.detach(|| brute_force_problem(g, &spec)) {
        Ok(s) => Ok(Some(s.value)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(to_py(e)),
    }
}

/// Warnings about inputs where the answer may not be the intended optimum.
#[pyfunction]
#[pyo3(signature = (graph, problem, *, t = None, terminals = None))]
fn caveats(graph: &PyGraph, problem: &str, t: Option<usize>, terminals: Option<Vec<usize>>) -> PyResult<Vec<String>> {
    let spec = build_spec(problem, t, None, terminals, None, None, None)?;
    Ok(check_class_caveats(&graph.inner, &spec))
}

#[pyfunction]
fn minimal_separators(py: Python<'_>, graph: &PyGraph) -> PyResult<Vec<Vec<usize>>> {
    let g = &graph.inner;
    let seps = py.detach(|| enumerate_minimal_separators(g, Budgets::default().separators)).map_err(to_py)?;
    Ok(seps.iter().map(ids).collect())
}

#[pyfunction]
fn potential_maximal_cliques(py: Python<'_>, graph: &PyGraph) -> PyResult<Vec<Vec<usize>>> {
    let g = &graph.inner;
    let pmcs = py
        .detach(|| {
            if !g.is_connected() {
                return Err(Error::Disconnected);
            }
            let seps = enumerate_minimal_separators(g, Budgets::default().separators)?;
            enumerate_pmcs(g, &seps, &Budgets::default())
        })
        .map_err(to_py)?;
    Ok(pmcs.iter().map(ids).collect())
}

/// Names of the built-in problems.
#[pyfunction]
fn problems() -> Vec<String> {
    problem_catalog().into_iter().map(|p| p.name).collect()
}

#[pymodule]
fn pmcsolve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySolution>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(caveats, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_separators, m)?)?;
    m.add_function(wrap_pyfunction!(potential_maximal_cliques, m)?)?;
    m.add_function(wrap_pyfunction!(problems, m)?)?;
    Ok(())
}
