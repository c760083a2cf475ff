//! Local clustering with approximate personalized PageRank.
//!
//! The push procedure maintains an approximation `p` and a residual `r`, with
//! all mass starting as residual on the seed. Pushing a vertex `u` moves
//! `alpha * r(u)` into `p(u)`, keeps half of the remainder at `u` and spreads
//! the other half over its neighbors in proportion to edge weight. Vertices
//! are pushed from a FIFO queue until `r(u) < epsilon * deg(u)` everywhere.
//! The cluster is then the lowest-conductance prefix of the support of `p`
//! ordered by `p(u) / deg(u)`.
//!
//! Everything here talks to the graph only through [`LocalGraph`] queries on
//! vertices reachable from the seed, so the work done is independent of the
//! size of the graph.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{LocalGraph, Neighbor, VertexId, VertexSet};

/// Teleport probability used by [`local_cluster`].
pub const DEFAULT_ALPHA: f64 = 1.0 / 2000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AclParams {
    alpha: f64,
    epsilon: f64,
}

impl AclParams {
    pub fn new(alpha: f64, epsilon: f64) -> Result<AclParams> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(AclParams { alpha, epsilon })
    }

    /// `alpha = 1/2000`, `epsilon = 1 / (20 * target_volume)`.
    pub fn for_target_volume(target_volume: f64) -> Result<AclParams> {
        if !(target_volume > 0.0 && target_volume.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "target volume must be positive, got {target_volume}"
            )));
        }
        AclParams::new(DEFAULT_ALPHA, 1.0 / (20.0 * target_volume))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Vertex-indexed non-negative values. Zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: HashMap<VertexId, f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit mass on `v`.
    pub fn indicator(v: VertexId) -> Self {
        let mut s = Self::new();
        s.set(v, 1.0);
        s
    }

    pub fn get(&self, v: VertexId) -> f64 {
        self.entries.get(&v).copied().unwrap_or(0.0)
    }

    /// Set `v` to `value`; a zero removes the entry. Panics on a negative or
    /// non-finite value.
    pub fn set(&mut self, v: VertexId, value: f64) {
        assert!(
            value >= 0.0 && value.is_finite(),
            "sparse vector entries must be finite and non-negative"
        );
        if value == 0.0 {
            self.entries.remove(&v);
        } else {
            self.entries.insert(v, value);
        }
    }

    pub fn add(&mut self, v: VertexId, amount: f64) -> f64 {
        let value = self.get(v) + amount;
        self.set(v, value);
        value
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.entries.iter().map(|(&v, &x)| (v, x))
    }

    /// Support vertices in increasing id order.
    pub fn support(&self) -> Vec<VertexId> {
        let mut s: Vec<_> = self.entries.keys().copied().collect();
        s.sort_unstable();
        s
    }
}

impl FromIterator<(VertexId, f64)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (VertexId, f64)>>(iter: I) -> Self {
        let mut s = SparseVector::new();
        for (v, x) in iter {
            s.add(v, x);
        }
        s
    }
}

/// Result of [`approximate_pagerank`].
#[derive(Debug, Clone, PartialEq)]
pub struct PagerankPair {
    /// Approximate personalized PageRank.
    pub p: SparseVector,
    /// Residual mass not yet pushed.
    pub r: SparseVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// The chosen prefix, in increasing id order.
    pub cluster: VertexSet,
    /// Local conductance of `cluster`.
    pub conductance: f64,
    /// `(prefix size, conductance)` for every prefix of the sweep order.
    pub profile: Vec<(usize, f64)>,
}

/// Per-call memo of the neighborhoods fetched so far. Queries against a
/// lazily loaded graph are expensive, and a vertex is usually pushed many
/// times.
struct Neighborhoods<'g, G: LocalGraph + ?Sized> {
    graph: &'g G,
    memo: HashMap<VertexId, (Cow<'g, [Neighbor]>, f64)>,
}

impl<'g, G: LocalGraph + ?Sized> Neighborhoods<'g, G> {
    fn new(graph: &'g G) -> Self {
        Self {
            graph,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, v: VertexId) -> Result<&(Cow<'g, [Neighbor]>, f64)> {
        match self.memo.entry(v) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(e) => Ok(e.insert(self.graph.neighborhood(v)?)),
        }
    }

    fn degree(&mut self, v: VertexId) -> Result<f64> {
        Ok(self.get(v)?.1)
    }

    fn neighbors(&mut self, v: VertexId) -> Result<&[Neighbor]> {
        Ok(&self.get(v)?.0)
    }

    /// `cut(S) / vol(S)` by a fresh scan over `s`, summing in the same order
    /// as [`local_conductance`](crate::graph::local_conductance).
    fn local_conductance(&mut self, s: &VertexSet) -> Result<f64> {
        let members: HashSet<VertexId> = s.iter().collect();
        let (mut volume, mut cut) = (0.0, 0.0);
        for v in s.iter() {
            let (row, degree) = self.get(v)?;
            volume += degree;
            for n in row.iter() {
                if !members.contains(&n.id) {
                    cut += n.weight;
                }
            }
        }
        if volume <= 0.0 {
            return Err(Error::ZeroVolume);
        }
        Ok(cut / volume)
    }
}

/// Dense working storage for one push run. Vertices get slots in the order
/// they are first touched; a row is translated to slots on its first push.
/// `rows[u]` is `None` before the first push of `u` and while it is pushed.
#[derive(Default)]
struct PushState {
    slots: HashMap<VertexId, usize>,
    ids: Vec<VertexId>,
    degrees: Vec<Option<f64>>,
    rows: Vec<Option<Vec<(usize, f64)>>>,
    p: Vec<f64>,
    r: Vec<f64>,
    queued: Vec<bool>,
}

impl PushState {
    fn slot(&mut self, v: VertexId) -> usize {
        if let Some(&s) = self.slots.get(&v) {
            return s;
        }
        let s = self.ids.len();
        self.slots.insert(v, s);
        self.ids.push(v);
        self.degrees.push(None);
        self.rows.push(None);
        self.p.push(0.0);
        self.r.push(0.0);
        self.queued.push(false);
        s
    }

    fn degree<G: LocalGraph + ?Sized>(
        &mut self,
        graph: &mut Neighborhoods<'_, G>,
        s: usize,
    ) -> Result<f64> {
        match self.degrees[s] {
            Some(d) => Ok(d),
            None => Ok(*self.degrees[s].insert(graph.degree(self.ids[s])?)),
        }
    }

    fn row<G: LocalGraph + ?Sized>(
        &mut self,
        graph: &mut Neighborhoods<'_, G>,
        s: usize,
    ) -> Result<Vec<(usize, f64)>> {
        if let Some(row) = self.rows[s].take() {
            return Ok(row);
        }
        let id = self.ids[s];
        let neighbors = graph.neighbors(id)?.to_vec();
        // a self-loop carries twice its weight, matching its share of the degree
        Ok(neighbors
            .iter()
            .map(|n| {
                let weight = if n.id == id { 2.0 * n.weight } else { n.weight };
                (self.slot(n.id), weight)
            })
            .collect())
    }

    fn collect(&self, values: &[f64]) -> SparseVector {
        self.ids
            .iter()
            .zip(values)
            .filter(|(_, &x)| x != 0.0)
            .map(|(&v, &x)| (v, x))
            .collect()
    }
}

/// Approximate personalized PageRank from `seed` by repeated pushes.
///
/// On return `r(u) < epsilon * deg(u)` for every vertex and
/// `sum(p) + sum(r) = 1` up to rounding. Floating-point results are
/// deterministic for a given graph and neighbor order, but are not promised
/// to be bit-identical across platforms.
pub fn approximate_pagerank<G: LocalGraph + ?Sized>(
    g: &G,
    seed: VertexId,
    params: AclParams,
) -> Result<PagerankPair> {
    approximate_pagerank_with(&mut Neighborhoods::new(g), seed, params)
}

fn approximate_pagerank_with<G: LocalGraph + ?Sized>(
    graph: &mut Neighborhoods<'_, G>,
    seed: VertexId,
    params: AclParams,
) -> Result<PagerankPair> {
    let AclParams { alpha, epsilon } = params;
    if graph.degree(seed)? <= 0.0 {
        return Err(Error::ZeroDegreeSeed(seed));
    }

    let mut state = PushState::default();
    let s = state.slot(seed);
    state.r[s] = 1.0;
    let mut queue = VecDeque::new();
    if 1.0 >= epsilon * state.degree(graph, s)? {
        queue.push_back(s);
        state.queued[s] = true;
    }

    while let Some(u) = queue.pop_front() {
        state.queued[u] = false;
        let residual = state.r[u];
        let degree = state.degree(graph, u)?;
        if degree <= 0.0 {
            return Err(Error::ZeroDegreeVertex(state.ids[u]));
        }
        if residual < epsilon * degree {
            continue;
        }

        state.p[u] += alpha * residual;
        state.r[u] = (1.0 - alpha) * residual / 2.0;

        let share = (1.0 - alpha) * residual / (2.0 * degree);
        // taken out while in use and put back afterwards
        let row = state.row(graph, u)?;
        for &(v, weight) in &row {
            state.r[v] += share * weight;
            if !state.queued[v] && state.r[v] >= epsilon * state.degree(graph, v)? {
                queue.push_back(v);
                state.queued[v] = true;
            }
        }
        state.rows[u] = Some(row);
        if !state.queued[u] && state.r[u] >= epsilon * degree {
            queue.push_back(u);
            state.queued[u] = true;
        }
    }

    let p = state.collect(&state.p);
    let r = state.collect(&state.r);
    Ok(PagerankPair { p, r })
}

/// Lowest-conductance prefix of the support of `p` ordered by `p(u) / deg(u)`.
///
/// Ties in the order go to the smaller id; ties in conductance to the
/// shorter prefix. Conductance here is `cut(S) / vol(S)`.
pub fn sweep_set<G: LocalGraph + ?Sized>(g: &G, p: &SparseVector) -> Result<SweepResult> {
    sweep_set_with(&mut Neighborhoods::new(g), p)
}

fn sweep_set_with<G: LocalGraph + ?Sized>(
    graph: &mut Neighborhoods<'_, G>,
    p: &SparseVector,
) -> Result<SweepResult> {
    if p.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut order = Vec::with_capacity(p.len());
    for v in p.support() {
        let degree = graph.degree(v)?;
        if degree <= 0.0 {
            return Err(Error::ZeroDegreeVertex(v));
        }
        order.push((v, p.get(v) / degree, degree));
    }
    order.sort_by(|a, b| match b.1.total_cmp(&a.1) {
        Ordering::Equal => a.0.cmp(&b.0),
        other => other,
    });

    let mut members = HashSet::with_capacity(order.len());
    let mut profile = Vec::with_capacity(order.len());
    let (mut volume, mut cut) = (0.0, 0.0);
    let mut best = (0usize, f64::INFINITY);
    for (i, &(u, _, degree)) in order.iter().enumerate() {
        volume += degree;
        for n in graph.neighbors(u)? {
            if n.id == u {
                continue;
            }
            if members.contains(&n.id) {
                cut -= n.weight;
            } else {
                cut += n.weight;
            }
        }
        members.insert(u);
        let conductance = f64::max(cut, 0.0) / volume;
        profile.push((i + 1, conductance));
        if conductance < best.1 {
            best = (i + 1, conductance);
        }
    }

    let mut cluster: Vec<VertexId> = order[..best.0].iter().map(|t| t.0).collect();
    cluster.sort_unstable();
    let cluster = VertexSet::from_distinct(cluster);
    let conductance = graph.local_conductance(&cluster)?;
    Ok(SweepResult {
        cluster,
        conductance,
        profile,
    })
}

/// Push then sweep, returning the full sweep result.
///
/// If no push happens at all (the seed's degree exceeds `1 / epsilon`), `p`
/// is empty and the cluster is just the seed.
pub fn local_cluster_acl_sweep<G: LocalGraph + ?Sized>(
    g: &G,
    seed: VertexId,
    params: AclParams,
) -> Result<SweepResult> {
    let mut graph = Neighborhoods::new(g);
    let pair = approximate_pagerank_with(&mut graph, seed, params)?;
    if pair.p.is_empty() {
        let cluster = VertexSet::from_distinct(vec![seed]);
        let conductance = graph.local_conductance(&cluster)?;
        return Ok(SweepResult {
            cluster,
            conductance,
            profile: vec![(1, conductance)],
        });
    }
    sweep_set_with(&mut graph, &pair.p)
}

/// The ACL local clustering algorithm with explicit teleport probability and
/// approximation threshold.
pub fn local_cluster_acl<G: LocalGraph + ?Sized>(
    g: &G,
    seed: VertexId,
    alpha: f64,
    epsilon: f64,
) -> Result<VertexSet> {
    let params = AclParams::new(alpha, epsilon)?;
    Ok(local_cluster_acl_sweep(g, seed, params)?.cluster)
}

/// Find a cluster around `seed` whose volume is roughly `target_volume`.
///
/// The target is a hint, not a constraint: it only sets the approximation
/// threshold of the PageRank computation.
pub fn local_cluster<G: LocalGraph + ?Sized>(
    g: &G,
    seed: VertexId,
    target_volume: f64,
) -> Result<VertexSet> {
    let params = AclParams::for_target_volume(target_volume)?;
    Ok(local_cluster_acl_sweep(g, seed, params)?.cluster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn two_triangles() -> Graph {
        Graph::from_edges([
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
        ])
        .unwrap()
    }

    fn path5() -> Graph {
        Graph::from_edges((0..4).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn params_are_validated() {
        assert!(AclParams::new(0.0, 0.1).is_err());
        assert!(AclParams::new(1.5, 0.1).is_err());
        assert!(AclParams::new(1.0, 0.0).is_err());
        assert!(AclParams::new(1.0, 0.1).is_ok());
        assert!(AclParams::for_target_volume(0.0).is_err());
        assert!(AclParams::for_target_volume(-3.0).is_err());
    }

    #[test]
    fn target_volume_defaults() {
        let params = AclParams::for_target_volume(100.0).unwrap();
        assert_eq!(params.alpha(), 0.0005);
        assert_eq!(params.epsilon(), 0.0005);
    }

    #[test]
    fn alpha_one_moves_all_mass_in_one_push() {
        let g = path5();
        let pair = approximate_pagerank(&g, 2, AclParams::new(1.0, 0.5).unwrap()).unwrap();
        assert_eq!(pair.p, SparseVector::indicator(2));
        assert!(pair.r.is_empty());
    }

    #[test]
    fn high_threshold_means_no_push() {
        let g = path5();
        // deg(2) = 2, so epsilon > 1/2 blocks the first push
        let pair = approximate_pagerank(&g, 2, AclParams::new(0.1, 0.6).unwrap()).unwrap();
        assert!(pair.p.is_empty());
        assert_eq!(pair.r, SparseVector::indicator(2));
    }

    #[test]
    fn seed_errors() {
        let g = Graph::from_edges([(0, 1, 1.0), (3, 3, 1.0)]).unwrap();
        let params = AclParams::new(0.1, 0.01).unwrap();
        assert!(matches!(
            approximate_pagerank(&g, 2, params),
            Err(Error::ZeroDegreeSeed(2))
        ));
        assert!(matches!(
            approximate_pagerank(&g, 9, params),
            Err(Error::UnknownVertex(9))
        ));
    }

    #[test]
    fn residual_bound_and_mass_conservation() {
        let g = path5();
        let params = AclParams::new(0.1, 1e-4).unwrap();
        let pair = approximate_pagerank(&g, 2, params).unwrap();
        for (u, ru) in pair.r.iter() {
            assert!(ru < 1e-4 * g.degree(u).unwrap());
        }
        assert!((pair.p.sum() + pair.r.sum() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn self_loops_conserve_mass() {
        let g = Graph::from_edges([(0, 0, 2.0), (0, 1, 1.0), (1, 2, 0.5), (2, 2, 1.0)]).unwrap();
        let pair = approximate_pagerank(&g, 0, AclParams::new(0.05, 1e-6).unwrap()).unwrap();
        assert!((pair.p.sum() + pair.r.sum() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn sweep_of_single_vertex() {
        let g = path5();
        let p = SparseVector::indicator(1);
        let result = sweep_set(&g, &p).unwrap();
        assert_eq!(result.cluster.as_slice(), &[1]);
        assert_eq!(result.conductance, 1.0);
        assert_eq!(result.profile, vec![(1, 1.0)]);
    }

    #[test]
    fn sweep_errors() {
        let g = Graph::from_edges([(0, 1, 1.0), (3, 3, 1.0)]).unwrap();
        assert!(matches!(
            sweep_set(&g, &SparseVector::new()),
            Err(Error::EmptySupport)
        ));
        assert!(matches!(
            sweep_set(&g, &SparseVector::indicator(2)),
            Err(Error::ZeroDegreeVertex(2))
        ));
    }

    #[test]
    fn sweep_breaks_ties_by_id_and_prefers_short_prefixes() {
        // path 0-1-2-3 with equal scores on 1 and 2
        let g = Graph::from_edges([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let p: SparseVector = [(2, 0.5), (1, 0.5)].into_iter().collect();
        let result = sweep_set(&g, &p).unwrap();
        // prefixes {1}: 2/2, {1,2}: 2/4
        assert_eq!(result.cluster.as_slice(), &[1, 2]);
        assert_eq!(result.profile, vec![(1, 1.0), (2, 0.5)]);

        // {0}: 1/1, {0,3}: 2/2 -- equal conductance keeps the shorter prefix
        let p: SparseVector = [(0, 0.5), (3, 0.5)].into_iter().collect();
        let result = sweep_set(&g, &p).unwrap();
        assert_eq!(result.cluster.as_slice(), &[0]);
    }

    #[test]
    fn finds_a_disconnected_triangle() {
        let g = two_triangles();
        let cluster = local_cluster_acl(&g, 0, 0.01, 1e-6).unwrap();
        assert_eq!(cluster.as_slice(), &[0, 1, 2]);
        let cluster = local_cluster(&g, 4, 6.0).unwrap();
        assert_eq!(cluster.as_slice(), &[3, 4, 5]);
    }

    #[test]
    fn alpha_one_returns_the_seed() {
        let g = two_triangles();
        assert_eq!(local_cluster_acl(&g, 1, 1.0, 0.01).unwrap().as_slice(), &[1]);
    }

    #[test]
    fn no_push_falls_back_to_the_seed() {
        let g = two_triangles();
        assert_eq!(local_cluster_acl(&g, 1, 0.1, 0.9).unwrap().as_slice(), &[1]);
    }

    #[test]
    fn rejects_bad_target_volume() {
        let g = two_triangles();
        assert!(matches!(
            local_cluster(&g, 0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }
}
