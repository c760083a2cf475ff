use std::ffi::CString;
use std::sync::Once;

use locus_py::locus_py;
use pyo3::prelude::*;
use pyo3::types::PyDict;

static INIT: Once = Once::new();

/// Run `code` with the extension registered as `locus`.
fn run(code: &str) {
    INIT.call_once(|| {
        pyo3::append_to_inittab!(locus_py);
        Python::initialize();
    });
    let dir = tempfile::tempdir().unwrap();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        globals.set_item("tmp", dir.path()).unwrap();
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn two_triangles() {
    run(r#"
import locus
g = locus.Graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
assert (g.num_vertices, g.num_edges) == (6, 6)
assert locus.local_cluster(g, 0, 6.0) == [0, 1, 2]
assert locus.local_cluster_acl(g, 4, 0.1, 1e-4) == [3, 4, 5]
assert g.local_conductance([0, 1, 2]) == 0.0
assert g.degree(0) == 2.0
"#);
}

#[test]
fn files_and_disk_graph() {
    run(r#"
import os, locus
g, labels = locus.sbm(2, 50, 0.3, 0.01, seed=4)
el = os.path.join(str(tmp), "g.el")
al = os.path.join(str(tmp), "g.al")
g.save(el)
locus.convert(el, al)
assert locus.Graph.load(al).edges() == g.edges()
disk = locus.DiskGraph(al, cache_lines=0)
assert locus.local_cluster(disk, 3, 300.0) == locus.local_cluster(g, 3, 300.0)
assert sorted(disk.neighbors(7)) == sorted(g.neighbors(7))
assert not disk.vertex_exists(100)
p, r = locus.approximate_pagerank(disk, 0, 0.1, 1e-3)
assert abs(sum(p.values()) + sum(r.values()) - 1) < 1e-9
"#);
}

#[test]
fn errors_keep_their_message() {
    run(r#"
import os, locus
try:
    locus.Graph.load(os.path.join(str(tmp), "missing.el"))
    raise AssertionError("no error")
except FileNotFoundError as e:
    assert "missing.el" in str(e)

bad = os.path.join(str(tmp), "bad.el")
with open(bad, "w") as f:
    f.write("0 1\n1 2\n2 x\n")
try:
    locus.Graph.load(bad)
    raise AssertionError("no error")
except locus.ParseError as e:
    assert "line 3" in str(e)
    assert isinstance(e, locus.LocusError)

g = locus.Graph([(0, 1)], num_vertices=3)
for call in (lambda: locus.local_cluster(g, 9, 10.0), lambda: locus.local_cluster(g, 2, 10.0)):
    try:
        call()
        raise AssertionError("no error")
    except locus.LocusError:
        pass
try:
    locus.local_cluster("not a graph", 0, 1.0)
    raise AssertionError("no error")
except TypeError:
    pass
"#);
}

#[test]
fn spectral_and_generators() {
    run(r#"
import locus
g, planted = locus.sbm(3, 40, 0.6, 0.02, seed=5)
labels = locus.spectral_cluster(g, 3, seed=1)
assert locus.adjusted_rand_index(labels, planted) > 0.95
er = locus.erdos_renyi(200, 0.05, seed=2)
assert er.num_vertices == 200
assert er.edges() == locus.erdos_renyi(200, 0.05, seed=2).edges()
"#);
}
