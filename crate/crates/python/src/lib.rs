//! Python bindings. Everything here converts arguments, releases the GIL and
//! calls into `locus`; no algorithm lives in this crate.

use std::collections::HashMap;
use std::path::PathBuf;

use locus::io::{self, Format};
use locus::{LocalGraph, SbmSpec, VertexId, VertexSet};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyFileNotFoundError, PyOSError, PyValueError};
use pyo3::prelude::*;

create_exception!(locus, LocusError, PyException, "Base class for errors raised by locus.");
create_exception!(locus, ParseError, LocusError, "A graph file could not be parsed.");

fn to_py(err: locus::Error) -> PyErr {
    let message = err.to_string();
    match err {
        locus::Error::FileNotFound { .. } => PyFileNotFoundError::new_err(message),
        locus::Error::Io(_) => PyOSError::new_err(message),
        e if e.is_parse_error() => ParseError::new_err(message),
        _ => LocusError::new_err(message),
    }
}

fn parse_format(format: Option<&str>, path: &std::path::Path) -> PyResult<Format> {
    match format {
        Some(name) => name.parse().map_err(to_py),
        None => Format::from_extension(path).ok_or_else(|| {
            PyValueError::new_err(format!(
                "cannot guess the format of {}; pass format='edgelist' or 'adjacencylist'",
                path.display()
            ))
        }),
    }
}

/// An in-memory weighted undirected graph.
#[pyclass(name = "Graph", module = "locus", frozen)]
struct PyGraph(locus::Graph);

#[pymethods]
impl PyGraph {
    /// Build from `(u, v)` or `(u, v, weight)` tuples. `num_vertices` pads
    /// the graph with isolated vertices.
    #[new]
    #[pyo3(signature = (edges, num_vertices = None))]
    fn new(edges: Vec<Bound<'_, PyAny>>, num_vertices: Option<u64>) -> PyResult<Self> {
        let mut builder = locus::GraphBuilder::new();
        if let Some(n) = num_vertices {
            builder.ensure_vertices(n);
        }
        for edge in edges {
            let (u, v, w) = match edge.extract::<(VertexId, VertexId, f64)>() {
                Ok(t) => t,
                Err(_) => {
                    let (u, v) = edge.extract::<(VertexId, VertexId)>()?;
                    (u, v, 1.0)
                }
            };
            builder.add_edge(u, v, w).map_err(to_py)?;
        }
        Ok(PyGraph(builder.build().map_err(to_py)?))
    }

    /// Read a graph file; the format is guessed from the extension if not given.
    #[staticmethod]
    #[pyo3(signature = (path, format = None))]
    fn load(py: Python<'_>, path: PathBuf, format: Option<&str>) -> PyResult<Self> {
        let format = parse_format(format, &path)?;
        let g = py.detach(|| io::load_graph(&path, format)).map_err(to_py)?;
        Ok(PyGraph(g))
    }

    #[pyo3(signature = (path, format = None))]
    fn save(&self, py: Python<'_>, path: PathBuf, format: Option<&str>) -> PyResult<()> {
        let format = parse_format(format, &path)?;
        py.detach(|| io::save_graph(&self.0, &path, format)).map_err(to_py)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.0.num_edges()
    }

    fn neighbors(&self, v: VertexId) -> PyResult<Vec<(VertexId, f64)>> {
        let row = self.0.neighbors(v).map_err(to_py)?;
        Ok(row.iter().map(|n| (n.id, n.weight)).collect())
    }

    fn degree(&self, v: VertexId) -> PyResult<f64> {
        self.0.degree(v).map_err(to_py)
    }

    /// Each edge once, as `(u, v, weight)` with `u <= v`.
    fn edges(&self) -> Vec<(VertexId, VertexId, f64)> {
        self.0.edges().collect()
    }

    fn volume(&self, vertices: Vec<VertexId>) -> PyResult<f64> {
        let s = VertexSet::new(vertices).map_err(to_py)?;
        locus::volume(&self.0, &s).map_err(to_py)
    }

    /// `cut(S) / min(vol(S), vol(V \ S))`.
    fn conductance(&self, vertices: Vec<VertexId>) -> PyResult<f64> {
        let s = VertexSet::new(vertices).map_err(to_py)?;
        locus::conductance(&self.0, &s).map_err(to_py)
    }

    /// `cut(S) / vol(S)`.
    fn local_conductance(&self, vertices: Vec<VertexId>) -> PyResult<f64> {
        let s = VertexSet::new(vertices).map_err(to_py)?;
        locus::local_conductance(&self.0, &s).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.num_vertices()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(num_vertices={}, num_edges={})",
            self.0.num_vertices(),
            self.0.num_edges()
        )
    }
}

/// A sorted AdjacencyList file queried in place.
#[pyclass(name = "DiskGraph", module = "locus", frozen)]
struct PyDiskGraph(locus::DiskGraph);

#[pymethods]
impl PyDiskGraph {
    /// `cache_lines` parsed lines are kept in an LRU cache; 0 disables it.
    #[new]
    #[pyo3(signature = (path, cache_lines = None))]
    fn new(path: PathBuf, cache_lines: Option<usize>) -> PyResult<Self> {
        let disk = match cache_lines {
            Some(n) => locus::DiskGraph::with_cache(&path, n),
            None => locus::DiskGraph::open(&path),
        };
        Ok(PyDiskGraph(disk.map_err(to_py)?))
    }

    fn neighbors(&self, py: Python<'_>, v: VertexId) -> PyResult<Vec<(VertexId, f64)>> {
        let row = py.detach(|| self.0.lookup(v)).map_err(to_py)?;
        Ok(row.iter().map(|n| (n.id, n.weight)).collect())
    }

    fn degree(&self, py: Python<'_>, v: VertexId) -> PyResult<f64> {
        py.detach(|| self.0.degree(v)).map_err(to_py)
    }

    fn vertex_exists(&self, py: Python<'_>, v: VertexId) -> PyResult<bool> {
        py.detach(|| self.0.vertex_exists(v)).map_err(to_py)
    }

    /// Scan the whole file and check the format and id order.
    fn validate(&self, py: Python<'_>) -> PyResult<()> {
        py.detach(|| self.0.validate()).map_err(to_py)
    }

    #[getter]
    fn file_size(&self) -> u64 {
        self.0.file_size()
    }

    #[getter]
    fn bytes_read(&self) -> u64 {
        self.0.bytes_read()
    }

    fn reset_counters(&self) {
        self.0.reset_counters()
    }

    fn __repr__(&self) -> String {
        format!("DiskGraph({:?})", self.0.path())
    }
}

/// Either kind of graph, borrowed for the duration of one call.
enum AnyGraph<'py> {
    Memory(PyRef<'py, PyGraph>),
    Disk(PyRef<'py, PyDiskGraph>),
}

impl<'py> FromPyObject<'_, 'py> for AnyGraph<'py> {
    type Error = PyErr;

    fn extract(ob: Borrowed<'_, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(g) = ob.extract::<PyRef<'py, PyGraph>>() {
            return Ok(AnyGraph::Memory(g));
        }
        match ob.extract::<PyRef<'py, PyDiskGraph>>() {
            Ok(g) => Ok(AnyGraph::Disk(g)),
            Err(_) => Err(pyo3::exceptions::PyTypeError::new_err(
                "expected a Graph or a DiskGraph",
            )),
        }
    }
}

impl AnyGraph<'_> {
    fn local(&self) -> &(dyn LocalGraph + Sync) {
        match self {
            AnyGraph::Memory(g) => &g.0,
            AnyGraph::Disk(g) => &g.0,
        }
    }
}

/// Cluster around `seed` aiming for a volume of roughly `target_volume`.
#[pyfunction]
fn local_cluster(py: Python<'_>, graph: AnyGraph<'_>, seed: VertexId, target_volume: f64) -> PyResult<Vec<VertexId>> {
    let g = graph.local();
    let cluster = py.detach(|| locus::local_cluster(g, seed, target_volume));
    Ok(cluster.map_err(to_py)?.into_vec())
}

/// Cluster around `seed` with explicit teleport probability and threshold.
#[pyfunction]
fn local_cluster_acl(
    py: Python<'_>,
    graph: AnyGraph<'_>,
    seed: VertexId,
    alpha: f64,
    epsilon: f64,
) -> PyResult<Vec<VertexId>> {
    let g = graph.local();
    let cluster = py.detach(|| locus::local_cluster_acl(g, seed, alpha, epsilon));
    Ok(cluster.map_err(to_py)?.into_vec())
}

/// The approximate PageRank vector and its residual, as `{vertex: value}` dicts.
#[pyfunction]
fn approximate_pagerank(
    py: Python<'_>,
    graph: AnyGraph<'_>,
    seed: VertexId,
    alpha: f64,
    epsilon: f64,
) -> PyResult<(HashMap<VertexId, f64>, HashMap<VertexId, f64>)> {
    let params = locus::AclParams::new(alpha, epsilon).map_err(to_py)?;
    let g = graph.local();
    let pair = py.detach(|| locus::approximate_pagerank(g, seed, params)).map_err(to_py)?;
    Ok((pair.p.iter().collect(), pair.r.iter().collect()))
}

/// Label every vertex with one of `k` clusters.
#[pyfunction]
#[pyo3(signature = (graph, k, seed = 0))]
fn spectral_cluster(py: Python<'_>, graph: PyRef<'_, PyGraph>, k: usize, seed: u64) -> PyResult<Vec<usize>> {
    let g = &graph.0;
    py.detach(|| locus::spectral_cluster(g, k, seed)).map_err(to_py)
}

/// A stochastic block model graph and its planted labels.
#[pyfunction]
#[pyo3(signature = (k, cluster_size, p, q, seed = 0))]
fn sbm(py: Python<'_>, k: usize, cluster_size: usize, p: f64, q: f64, seed: u64) -> PyResult<(PyGraph, Vec<usize>)> {
    let spec = SbmSpec {
        k,
        cluster_size,
        p,
        q,
        rng_seed: seed,
    };
    let (g, labels) = py.detach(|| locus::sbm(&spec)).map_err(to_py)?;
    Ok((PyGraph(g), labels))
}

#[pyfunction]
#[pyo3(signature = (n, p, seed = 0))]
fn erdos_renyi(py: Python<'_>, n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    let g = py.detach(|| locus::erdos_renyi(n, p, seed)).map_err(to_py)?;
    Ok(PyGraph(g))
}

/// Stream one graph file into the other format without loading it.
#[pyfunction]
fn convert(py: Python<'_>, src: PathBuf, dst: PathBuf) -> PyResult<()> {
    let from = parse_format(None, &src)?;
    let to = parse_format(None, &dst)?;
    py.detach(|| match (from, to) {
        (Format::EdgeList, Format::AdjacencyList) => io::edgelist_to_adjacencylist(&src, &dst),
        (Format::AdjacencyList, Format::EdgeList) => io::adjacencylist_to_edgelist(&src, &dst),
        (_, format) => io::load_graph(&src, from).and_then(|g| io::save_graph(&g, &dst, format)),
    })
    .map_err(to_py)
}

#[pyfunction]
fn adjusted_rand_index(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    if a.len() != b.len() {
        return Err(PyValueError::new_err("label lists differ in length"));
    }
    Ok(locus::cluster::metrics::adjusted_rand_index(&a, &b))
}

#[pymodule]
#[pyo3(name = "locus")]
pub fn locus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDiskGraph>()?;
    m.add("LocusError", m.py().get_type::<LocusError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add_function(wrap_pyfunction!(local_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(local_cluster_acl, m)?)?;
    m.add_function(wrap_pyfunction!(approximate_pagerank, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(sbm, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(convert, m)?)?;
    m.add_function(wrap_pyfunction!(adjusted_rand_index, m)?)?;
    Ok(())
}
