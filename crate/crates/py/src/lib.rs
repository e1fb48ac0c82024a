use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use explab::bounds::{self, BoundReport, ExpansionParams};
use explab::codes::{self, LinearCode};
use explab::fields::{Elem, Field};
use explab::graphs::{BipartiteGraph, Graph};
use explab::oracle;
use explab::spectral;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON into plain Python objects.
fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A number given as a float, an int, or a `"p/q"` string.
#[derive(FromPyObject)]
enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn ratio(&self) -> PyResult<Ratio<i64>> {
        match self {
            Num::Int(i) => Ok(Ratio::from_integer(*i)),
            Num::Text(s) => bounds::parse_fraction(s).map_err(err),
            Num::Float(x) => Ratio::approximate_float(*x).ok_or_else(|| err(format!("cannot represent {x}"))),
        }
    }

    fn value(&self) -> PyResult<f64> {
        match self {
            Num::Int(i) => Ok(*i as f64),
            Num::Float(x) => Ok(*x),
            Num::Text(s) => bounds::parse_fraction(s).map(bounds::ratio_to_f64).map_err(err),
        }
    }
}

fn opt(x: Option<Num>) -> PyResult<Option<f64>> {
    x.map(|n| n.value()).transpose()
}

#[pyclass(name = "Graph", module = "pyexplab", frozen)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Graph::from_edges(n, &edges).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        Graph::complete(n).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Graph::cycle(n).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn circulant(n: usize, offsets: Vec<usize>) -> PyResult<Self> {
        Graph::circulant(n, &offsets).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn paley(q: usize) -> PyResult<Self> {
        Graph::paley(q).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn petersen() -> Self {
        Self { inner: Graph::petersen() }
    }

    #[staticmethod]
    #[pyo3(signature = (n, d, seed=0))]
    fn random_regular(n: usize, d: usize, seed: u64) -> PyResult<Self> {
        Graph::random_regular(n, d, seed).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    /// Common degree, or `None` if the graph is not regular.
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.regular_degree()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.n() {
            return Err(err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn boundary(&self, s: Vec<usize>) -> PyResult<Vec<usize>> {
        self.inner.boundary(&s).map_err(err)
    }

    fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.adjacency_matrix()
    }

    #[pyo3(signature = (tol=spectral::DEFAULT_TOL))]
    fn spectrum<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let s = spectral::graph_spectrum(&self.inner, tol).map_err(err)?;
        to_py(py, &s)
    }

    fn mu(&self) -> PyResult<f64> {
        spectral::mu(&self.inner).map_err(err)
    }

    fn edge_vertex(&self) -> PyResult<PyBipartiteGraph> {
        BipartiteGraph::edge_vertex(&self.inner).map(|inner| PyBipartiteGraph { inner }).map_err(err)
    }

    #[pyo3(signature = (tol=spectral::DEFAULT_TOL))]
    fn edge_vertex_spectrum<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let r = spectral::edge_vertex_spectrum(&self.inner, tol).map_err(err)?;
        to_py(py, &r)
    }

    /// Exhaustive checks of the Alon-Chung and neighborhood-sum inequalities.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let gs = spectral::graph_spectrum(&self.inner, spectral::DEFAULT_TOL).map_err(err)?;
        let ac = oracle::verify_alon_chung(&self.inner, &gs, "graph").map_err(err)?;
        let nb = oracle::verify_nbhd_and_boundary(&self.inner, &gs, "graph").map_err(err)?;
        to_py(py, &serde_json::json!({ "alon_chung": ac, "nbhd_and_boundary": nb }))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.num_edges())
    }
}

#[pyclass(name = "BipartiteGraph", module = "pyexplab", frozen)]
struct PyBipartiteGraph {
    inner: BipartiteGraph,
}

#[pymethods]
impl PyBipartiteGraph {
    #[new]
    fn new(n_out: usize, nbrs: Vec<Vec<usize>>) -> PyResult<Self> {
        BipartiteGraph::new(n_out, nbrs).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn n_in(&self) -> usize {
        self.inner.n_in()
    }

    #[getter]
    fn n_out(&self) -> usize {
        self.inner.n_out()
    }

    #[getter]
    fn c(&self) -> usize {
        self.inner.c()
    }

    #[getter]
    fn d_out(&self) -> usize {
        self.inner.d_out()
    }

    fn input_neighbors(&self, t: usize) -> PyResult<Vec<usize>> {
        if t >= self.inner.n_in() {
            return Err(err(format!("input {t} out of range")));
        }
        Ok(self.inner.input_neighbors(t).to_vec())
    }

    fn constraint_order(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.n_out() {
            return Err(err(format!("output {i} out of range")));
        }
        Ok(self.inner.constraint_order(i).to_vec())
    }

    fn with_shuffled_order(&self, seed: u64) -> Self {
        Self { inner: self.inner.with_shuffled_order(seed) }
    }

    fn boundary(&self, t: Vec<usize>) -> PyResult<Vec<usize>> {
        self.inner.bip_boundary(&t).map_err(err)
    }

    fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.incidence_matrix()
    }

    /// Exact `min |∂T|/|T|` over `|T| ≤ α·n_in`, with a witness.
    fn exact_expansion<'py>(&self, py: Python<'py>, alpha: Num) -> PyResult<Bound<'py, PyAny>> {
        let w = oracle::exact_expansion(&self.inner, alpha.ratio()?).map_err(err)?;
        to_py(
            py,
            &serde_json::json!({
                "ratio": w.ratio.to_string(),
                "value": bounds::ratio_to_f64(w.ratio),
                "size": w.size,
                "boundary_size": w.boundary_size,
                "subset": w.members(),
            }),
        )
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("BipartiteGraph(n_in={}, n_out={})", self.inner.n_in(), self.inner.n_out())
    }
}

#[pyclass(name = "LinearCode", module = "pyexplab", frozen)]
struct PyLinearCode {
    inner: LinearCode,
}

fn field(q: u32) -> PyResult<Field> {
    Field::with_order(q).map_err(err)
}

#[pymethods]
impl PyLinearCode {
    #[staticmethod]
    #[pyo3(signature = (n, generator, q=2))]
    fn from_generator(n: usize, generator: Vec<Vec<Elem>>, q: u32) -> PyResult<Self> {
        LinearCode::from_generator(&field(q)?, n, generator).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, parity_check, q=2))]
    fn from_parity_check(n: usize, parity_check: Vec<Vec<Elem>>, q: u32) -> PyResult<Self> {
        LinearCode::from_parity_check(&field(q)?, n, parity_check).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, q=2))]
    fn repetition(n: usize, q: u32) -> PyResult<Self> {
        codes::repetition(n, &field(q)?).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, q=2))]
    fn parity(n: usize, q: u32) -> PyResult<Self> {
        codes::parity(n, &field(q)?).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn hamming74() -> Self {
        Self { inner: codes::hamming74() }
    }

    #[staticmethod]
    fn reed_solomon(n: usize, k: usize, q: u32) -> PyResult<Self> {
        codes::reed_solomon(n, k, &field(q)?).map(|inner| Self { inner }).map_err(err)
    }

    /// Restriction to the prime subfield.
    fn subfield_subcode(&self) -> PyResult<Self> {
        let sub = field(self.inner.field().characteristic())?;
        codes::subfield_subcode(&self.inner, &sub).map(|inner| Self { inner }).map_err(err)
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
    fn q(&self) -> usize {
        self.inner.field().order()
    }

    fn generator(&self) -> Vec<Vec<Elem>> {
        self.inner.generator().to_vec()
    }

    fn parity_check(&self) -> Vec<Vec<Elem>> {
        self.inner.parity_check().to_vec()
    }

    fn encode(&self, msg: Vec<Elem>) -> PyResult<Vec<Elem>> {
        self.inner.encode(&msg).map_err(err)
    }

    fn contains(&self, word: Vec<Elem>) -> bool {
        self.inner.contains(&word)
    }

    /// Brute-forced minimum distance.
    fn min_distance(&self, py: Python<'_>) -> PyResult<usize> {
        let code = &self.inner;
        py.detach(|| oracle::min_distance_bruteforce(code)).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("LinearCode(n={}, k={}, q={})", self.inner.n(), self.inner.k(), self.inner.field().order())
    }
}

#[pyfunction]
fn improved_bound(d: f64, mu: f64, alpha: Num) -> PyResult<f64> {
    Ok(bounds::improved_bound(d, mu, alpha.value()?).value)
}

#[pyfunction]
fn edge_vertex_tanner_bound(d: f64, mu: f64, alpha: Num) -> PyResult<f64> {
    Ok(bounds::edge_vertex_tanner_bound(d, mu, alpha.value()?))
}

#[pyfunction]
fn tanner_bound(c: f64, d: f64, mu: f64, alpha: Num) -> PyResult<f64> {
    bounds::tanner_bound(c, d, mu, alpha.value()?).map_err(err)
}

#[pyfunction]
fn ss_distance_and_rate<'py>(py: Python<'py>, d: f64, mu: f64, epsilon: Num, r: Num) -> PyResult<Bound<'py, PyAny>> {
    let s = bounds::ss_distance_and_rate(d, mu, epsilon.value()?, r.value()?).map_err(err)?;
    to_py(py, &s)
}

#[pyfunction]
fn exp_code_distance_bounds<'py>(py: Python<'py>, d: f64, mu: f64, delta0: Num, n: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::exp_code_distance_bounds(d, mu, delta0.value()?, n))
}

#[pyfunction]
fn family_row<'py>(py: Python<'py>, m: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::family_row(m))
}

/// Every bound whose inputs are given.
#[pyfunction]
#[pyo3(signature = (d, mu, alpha=None, epsilon=None, r=None, delta0=None, n=None, gamma=None, c=None, lambda1=None, lambda_min=None))]
#[allow(clippy::too_many_arguments)]
fn bound_report<'py>(
    py: Python<'py>,
    d: f64,
    mu: f64,
    alpha: Option<Num>,
    epsilon: Option<Num>,
    r: Option<Num>,
    delta0: Option<Num>,
    n: Option<f64>,
    gamma: Option<Num>,
    c: Option<f64>,
    lambda1: Option<f64>,
    lambda_min: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut p = ExpansionParams::new(d, mu);
    p.alpha = opt(alpha)?;
    p.epsilon = opt(epsilon)?;
    p.r = opt(r)?;
    p.delta0 = opt(delta0)?;
    p.gamma = opt(gamma)?;
    p.n = n;
    p.lambda1 = lambda1;
    p.lambda_min = lambda_min;
    if let Some(c) = c {
        p.c = c;
    }
    to_py(py, &BoundReport::evaluate(&p))
}

/// Builds the constraint-stamped code on the edge-vertex graph and reports its distance.
#[pyfunction]
fn sipser_spielman<'py>(py: Python<'py>, graph: &PyGraph, inner: &PyLinearCode) -> PyResult<(PyLinearCode, Bound<'py, PyAny>)> {
    let (g, c) = (&graph.inner, &inner.inner);
    let (code, report) = py.detach(|| codes::sipser_spielman_report(g, c)).map_err(err)?;
    Ok((PyLinearCode { inner: code }, to_py(py, &report)?))
}

#[pyfunction]
fn expander_map_distance<'py>(py: Python<'py>, graph: &PyGraph, code: &PyLinearCode) -> PyResult<Bound<'py, PyAny>> {
    let (g, c) = (&graph.inner, &code.inner);
    let report = py.detach(|| codes::expander_map_distance(g, c)).map_err(err)?;
    to_py(py, &report)
}

/// Output blocks of the neighborhood expander map, one list of GF(q) symbols per vertex.
#[pyfunction]
fn expander_map(graph: &PyGraph, code: &PyLinearCode, word: Vec<Elem>) -> PyResult<Vec<Vec<Elem>>> {
    let map = codes::ExpanderMap::new(&graph.inner).map_err(err)?;
    let out = map.apply(code.inner.field(), &word).map_err(err)?;
    Ok(out.iter().map(|s| s.coords().to_vec()).collect())
}

#[pymodule]
fn pyexplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyBipartiteGraph>()?;
    m.add_class::<PyLinearCode>()?;
    m.add_function(wrap_pyfunction!(improved_bound, m)?)?;
    m.add_function(wrap_pyfunction!(edge_vertex_tanner_bound, m)?)?;
    m.add_function(wrap_pyfunction!(tanner_bound, m)?)?;
    m.add_function(wrap_pyfunction!(ss_distance_and_rate, m)?)?;
    m.add_function(wrap_pyfunction!(exp_code_distance_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(family_row, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(sipser_spielman, m)?)?;
    m.add_function(wrap_pyfunction!(expander_map_distance, m)?)?;
    m.add_function(wrap_pyfunction!(expander_map, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
