//! Graph builders and small oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use locus::{Graph, GraphBuilder, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edges = Vec<(VertexId, VertexId, f64)>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub enum Weights {
    Unit,
    /// Uniform on `1..=max`; sums stay exact in floating point.
    Integer(u32),
    Real,
}

pub fn weight(rng: &mut ChaCha8Rng, weights: Weights) -> f64 {
    match weights {
        Weights::Unit => 1.0,
        Weights::Integer(max) => rng.random_range(1..=max) as f64,
        Weights::Real => rng.random_range(0.1..5.0),
    }
}

/// Every pair `u < v` independently with probability `p`, plus a self-loop
/// on each vertex with probability `loops`.
pub fn random_edges(
    rng: &mut ChaCha8Rng,
    n: u64,
    p: f64,
    loops: f64,
    weights: Weights,
) -> Edges {
    let mut edges = Vec::new();
    for u in 0..n {
        if loops > 0.0 && rng.random_bool(loops) {
            edges.push((u, u, weight(rng, weights)));
        }
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, weight(rng, weights)));
            }
        }
    }
    edges
}

/// A random spanning tree plus extra pairs with probability `p`, so every
/// vertex has positive degree once `n >= 2`.
pub fn connected_edges(
    rng: &mut ChaCha8Rng,
    n: u64,
    p: f64,
    loops: f64,
    weights: Weights,
) -> Edges {
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        seen.insert((u, v));
        edges.push((u, v, weight(rng, weights)));
    }
    for (u, v, w) in random_edges(rng, n, p, loops, weights) {
        if seen.insert((u, v)) {
            edges.push((u, v, w));
        }
    }
    edges
}

pub fn graph(n: u64, edges: &[(VertexId, VertexId, f64)]) -> Graph {
    let mut builder = GraphBuilder::new();
    builder.ensure_vertices(n);
    for &(u, v, w) in edges {
        builder.add_edge(u, v, w).unwrap();
    }
    builder.build().unwrap()
}

/// Weighted degrees straight from an edge list; a self-loop counts twice.
pub fn degrees(n: u64, edges: &[(VertexId, VertexId, f64)]) -> Vec<f64> {
    let mut d = vec![0.0; n as usize];
    for &(u, v, w) in edges {
        d[u as usize] += w;
        d[v as usize] += w;
    }
    d
}

/// Adjusted Rand index by enumerating every pair of items.
pub fn ari(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    // both = together in both labelings, only_a / only_b = together in one
    let (mut both, mut only_a, mut only_b, mut neither) = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let denominator = (both + only_a) * (only_a + neither) + (both + only_b) * (only_b + neither);
    if denominator == 0.0 {
        return 1.0;
    }
    2.0 * (both * neither - only_a * only_b) / denominator
}
