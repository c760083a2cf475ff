//! Graph representations and set statistics.
//!
//! [`Graph`] is an immutable weighted undirected graph in compressed sparse
//! row form. [`LocalGraph`] is the query contract the local clustering code
//! is written against; it is implemented by [`Graph`] and by
//! [`DiskGraph`](crate::disk::DiskGraph).
//!
//! Self-loops are stored once in their row and contribute twice their weight
//! to the degree, so that the volume of the vertex set is always twice the
//! total edge weight.

use std::borrow::Cow;
use std::collections::HashSet;

use crate::error::{Error, Result};

pub type VertexId = u64;

/// One adjacency entry: the neighbor's id and the weight of the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: VertexId,
    pub weight: f64,
}

impl Neighbor {
    pub fn new(id: VertexId, weight: f64) -> Self {
        Self { id, weight }
    }
}

/// Neighborhood queries by vertex id.
///
/// This is everything a local algorithm needs from a graph. Implementations
/// may fetch adjacency data lazily (from disk, a database, ...), which is why
/// every query is fallible.
pub trait LocalGraph {
    /// Neighbors of `v` with edge weights. A self-loop appears once.
    fn neighbors(&self, v: VertexId) -> Result<Cow<'_, [Neighbor]>>;

    /// Weighted degree of `v`; self-loops count twice.
    fn degree(&self, v: VertexId) -> Result<f64>;

    fn vertex_exists(&self, v: VertexId) -> Result<bool>;

    fn neighbors_unweighted(&self, v: VertexId) -> Result<Vec<VertexId>> {
        Ok(self.neighbors(v)?.iter().map(|n| n.id).collect())
    }

    fn degree_unweighted(&self, v: VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// Neighbors and degree of `v` together. Lazily loaded graphs should
    /// answer both from one read.
    fn neighborhood(&self, v: VertexId) -> Result<(Cow<'_, [Neighbor]>, f64)> {
        Ok((self.neighbors(v)?, self.degree(v)?))
    }
}

impl<G: LocalGraph + ?Sized> LocalGraph for &G {
    fn neighbors(&self, v: VertexId) -> Result<Cow<'_, [Neighbor]>> {
        (**self).neighbors(v)
    }
    fn degree(&self, v: VertexId) -> Result<f64> {
        (**self).degree(v)
    }
    fn vertex_exists(&self, v: VertexId) -> Result<bool> {
        (**self).vertex_exists(v)
    }
    fn neighbors_unweighted(&self, v: VertexId) -> Result<Vec<VertexId>> {
        (**self).neighbors_unweighted(v)
    }
    fn degree_unweighted(&self, v: VertexId) -> Result<usize> {
        (**self).degree_unweighted(v)
    }
    fn neighborhood(&self, v: VertexId) -> Result<(Cow<'_, [Neighbor]>, f64)> {
        (**self).neighborhood(v)
    }
}

/// Sum of incident weights in `row`, counting a self-loop on `v` twice.
pub(crate) fn degree_of_row(v: VertexId, row: &[Neighbor]) -> f64 {
    row.iter()
        .map(|n| if n.id == v { 2.0 * n.weight } else { n.weight })
        .sum()
}

/// Immutable weighted undirected graph over vertices `0..n`.
///
/// Rows are sorted by neighbor id, so two graphs with the same vertex count,
/// edge set and weights compare equal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<Neighbor>,
    degrees: Vec<f64>,
}

impl Graph {
    /// Build a graph from undirected edges. See [`GraphBuilder`] for the
    /// duplicate-handling rules.
    pub fn from_edges<I>(edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut builder = GraphBuilder::new();
        for (u, v, w) in edges {
            builder.add_edge(u, v, w)?;
        }
        builder.build()
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            adjacency: Vec::new(),
            degrees: vec![0.0; n],
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    /// Number of undirected edges, self-loops included.
    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.num_vertices() as u64
    }

    /// The sorted adjacency row of `v`. Panics if `v` is out of range.
    pub fn row(&self, v: VertexId) -> &[Neighbor] {
        let v = v as usize;
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Each undirected edge once as `(u, v, w)` with `u <= v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        (0..self.num_vertices() as u64).flat_map(move |u| {
            self.row(u)
                .iter()
                .filter(move |n| n.id >= u)
                .map(move |n| (u, n.id, n.weight))
        })
    }

    pub fn total_volume(&self) -> f64 {
        self.degrees.iter().sum()
    }

    pub fn has_non_unit_weights(&self) -> bool {
        self.adjacency.iter().any(|n| n.weight != 1.0)
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }
}

impl LocalGraph for Graph {
    fn neighbors(&self, v: VertexId) -> Result<Cow<'_, [Neighbor]>> {
        self.check(v)?;
        Ok(Cow::Borrowed(self.row(v)))
    }

    fn degree(&self, v: VertexId) -> Result<f64> {
        self.check(v)?;
        Ok(self.degrees[v as usize])
    }

    fn vertex_exists(&self, v: VertexId) -> Result<bool> {
        Ok(self.contains(v))
    }

    fn degree_unweighted(&self, v: VertexId) -> Result<usize> {
        self.check(v)?;
        Ok(self.row(v).len())
    }
}

/// Collects undirected edges and assembles a [`Graph`].
///
/// An unordered pair may be added any number of times as long as the weight
/// agrees every time; both orientations collapse into one edge. A conflicting
/// weight is an error.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    // (min, max, weight, source line or 0)
    edges: Vec<(VertexId, VertexId, f64, u64)>,
    min_vertices: u64,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Make sure the graph has at least `n` vertices, even if some are isolated.
    pub fn ensure_vertices(&mut self, n: u64) {
        self.min_vertices = self.min_vertices.max(n);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: f64) -> Result<()> {
        self.add_edge_at_line(u, v, weight, 0)
    }

    /// As [`add_edge`](Self::add_edge), remembering the input line so that a
    /// later weight conflict can be reported against it.
    pub fn add_edge_at_line(
        &mut self,
        u: VertexId,
        v: VertexId,
        weight: f64,
        line: u64,
    ) -> Result<()> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidWeight { u, v, weight });
        }
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push((a, b, weight, line));
        self.min_vertices = self.min_vertices.max(b + 1);
        Ok(())
    }

    pub fn build(mut self) -> Result<Graph> {
        let n = usize::try_from(self.min_vertices)
            .map_err(|_| Error::Overflow(format!("{} vertices", self.min_vertices)))?;
        self.edges.sort_unstable_by_key(|e| (e.0, e.1, e.3));

        let mut unique: Vec<(VertexId, VertexId, f64)> = Vec::with_capacity(self.edges.len());
        let mut last_line = 0;
        for &(u, v, w, line) in &self.edges {
            match unique.last() {
                Some(&(pu, pv, pw)) if pu == u && pv == v => {
                    if pw != w {
                        return Err(if line > 0 || last_line > 0 {
                            Error::ConflictingWeight {
                                line: line.max(last_line),
                                u,
                                v,
                                first: pw,
                                second: w,
                            }
                        } else {
                            Error::DuplicateEdge {
                                u,
                                v,
                                first: pw,
                                second: w,
                            }
                        });
                    }
                }
                _ => unique.push((u, v, w)),
            }
            last_line = line;
        }
        drop(self.edges);

        let mut counts = vec![0usize; n + 1];
        for &(u, v, _) in &unique {
            counts[u as usize + 1] += 1;
            if u != v {
                counts[v as usize + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts;

        // Filling rows in (u, v) order leaves each row sorted: row x first
        // receives the (u, x) entries with u < x, then its own (x, v) entries.
        let mut cursor = offsets.clone();
        let mut adjacency = vec![Neighbor::new(0, 0.0); offsets[n]];
        let mut degrees = vec![0.0; n];
        for &(u, v, w) in &unique {
            let (ui, vi) = (u as usize, v as usize);
            adjacency[cursor[ui]] = Neighbor::new(v, w);
            cursor[ui] += 1;
            if u != v {
                adjacency[cursor[vi]] = Neighbor::new(u, w);
                cursor[vi] += 1;
            }
        }
        for (v, degree) in degrees.iter_mut().enumerate() {
            *degree = degree_of_row(v as u64, &adjacency[offsets[v]..offsets[v + 1]]);
        }

        Ok(Graph {
            offsets,
            adjacency,
            degrees,
        })
    }
}

/// An ordered list of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new(members: Vec<VertexId>) -> Result<VertexSet> {
        let mut seen = HashSet::with_capacity(members.len());
        for &v in &members {
            if !seen.insert(v) {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} appears more than once in the set"
                )));
            }
        }
        Ok(VertexSet(members))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    pub(crate) fn from_distinct(members: Vec<VertexId>) -> VertexSet {
        VertexSet(members)
    }
}

impl From<VertexSet> for Vec<VertexId> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

/// Sum of member degrees.
pub fn volume<G: LocalGraph + ?Sized>(g: &G, s: &VertexSet) -> Result<f64> {
    let mut total = 0.0;
    for v in s.iter() {
        total += g.degree(v)?;
    }
    Ok(total)
}

/// Total weight of edges with exactly one endpoint in `s`.
pub fn cut_weight<G: LocalGraph + ?Sized>(g: &G, s: &VertexSet) -> Result<f64> {
    let members: HashSet<VertexId> = s.iter().collect();
    let mut cut = 0.0;
    for v in s.iter() {
        for n in g.neighbors(v)?.iter() {
            if !members.contains(&n.id) {
                cut += n.weight;
            }
        }
    }
    Ok(cut)
}

/// `cut(S) / min(vol(S), vol(V \ S))`.
pub fn conductance(g: &Graph, s: &VertexSet) -> Result<f64> {
    for v in s.iter() {
        g.check(v)?;
    }
    if s.is_empty() || s.len() >= g.num_vertices() {
        return Err(Error::EmptyOrFullSet);
    }
    let vol = volume(g, s)?;
    let denominator = vol.min(g.total_volume() - vol);
    if denominator <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(cut_weight(g, s)? / denominator)
}

/// `cut(S) / vol(S)`; the only conductance a local algorithm can compute,
/// since it never learns `vol(V)`.
pub fn local_conductance<G: LocalGraph + ?Sized>(g: &G, s: &VertexSet) -> Result<f64> {
    let vol = volume(g, s)?;
    if vol <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(cut_weight(g, s)? / vol)
}
