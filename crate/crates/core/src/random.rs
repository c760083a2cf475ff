//! Stochastic block model and Erdős–Rényi generators.
//!
//! Every block of vertex pairs (within one cluster, or between two clusters)
//! is sampled with its own ChaCha8 stream: the generator is seeded with
//! `rng_seed` and the stream number is the block index `i * k + j`. Within a
//! block, present pairs are found by geometric skipping, so the cost is
//! proportional to the number of edges rather than the number of pairs.
//! Output is reproducible for a given seed within one release of this crate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexId};

/// Largest vertex count the generators accept.
pub const MAX_VERTICES: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmSpec {
    pub k: usize,
    pub cluster_size: usize,
    /// Probability of an edge between two vertices of the same cluster.
    pub p: f64,
    /// Probability of an edge between vertices of different clusters.
    pub q: f64,
    pub rng_seed: u64,
}

impl SbmSpec {
    /// The benchmark graph: `k` clusters of 1000 vertices, `p = 0.01`, `q = 0.001 / k`.
    pub fn benchmark(k: usize, rng_seed: u64) -> SbmSpec {
        SbmSpec {
            k,
            cluster_size: 1000,
            p: 0.01,
            q: 0.001 / k as f64,
            rng_seed,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.k * self.cluster_size
    }

    fn validate(&self) -> Result<u64> {
        if self.k == 0 || self.cluster_size == 0 {
            return Err(Error::InvalidParameter(
                "k and cluster_size must be at least 1".into(),
            ));
        }
        for (name, value) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {value}"
                )));
            }
        }
        let n = (self.k as u64)
            .checked_mul(self.cluster_size as u64)
            .filter(|&n| n <= MAX_VERTICES)
            .ok_or_else(|| {
                Error::Overflow(format!(
                    "{} clusters of {} vertices exceeds the limit of {MAX_VERTICES} vertices",
                    self.k, self.cluster_size
                ))
            })?;
        Ok(n)
    }
}

/// Visit the indices in `0..count` that are selected independently with
/// probability `prob`.
fn for_each_selected(
    count: u64,
    prob: f64,
    rng: &mut ChaCha8Rng,
    mut visit: impl FnMut(u64),
) {
    if prob <= 0.0 || count == 0 {
        return;
    }
    if prob >= 1.0 {
        (0..count).for_each(visit);
        return;
    }
    let gaps = Geometric::new(prob).expect("probability lies in (0, 1)");
    let mut index = gaps.sample(rng);
    while index < count {
        visit(index);
        index = match index
            .checked_add(1)
            .and_then(|i| i.checked_add(gaps.sample(rng)))
        {
            Some(next) => next,
            None => break,
        };
    }
}

/// Sample a graph from the stochastic block model. Vertex `i` belongs to
/// cluster `i / cluster_size`; the planted labels are returned alongside.
pub fn sbm(spec: &SbmSpec) -> Result<(Graph, Vec<usize>)> {
    let n = spec.validate()?;
    let k = spec.k as u64;
    let size = spec.cluster_size as u64;
    let mut builder = GraphBuilder::new();
    builder.ensure_vertices(n);

    for i in 0..k {
        for j in i..k {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            rng.set_stream(i * k + j);
            let (base_i, base_j) = (i * size, j * size);
            if i == j {
                // pairs (a, b), a < b, enumerated row by row
                let mut row = 0u64;
                let mut row_start = 0u64;
                for_each_selected(size * (size - 1) / 2, spec.p, &mut rng, |t| {
                    while t >= row_start + (size - 1 - row) {
                        row_start += size - 1 - row;
                        row += 1;
                    }
                    let col = row + 1 + (t - row_start);
                    builder
                        .add_edge(base_i + row, base_i + col, 1.0)
                        .expect("unit weights are valid");
                });
            } else {
                for_each_selected(size * size, spec.q, &mut rng, |t| {
                    builder
                        .add_edge(base_i + t / size, base_j + t % size, 1.0)
                        .expect("unit weights are valid");
                });
            }
        }
    }

    let labels = (0..n as usize).map(|v| v / spec.cluster_size).collect();
    Ok((builder.build()?, labels))
}

/// G(n, p): every pair of distinct vertices is joined with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, rng_seed: u64) -> Result<Graph> {
    if n == 0 {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "p must lie in [0, 1], got {p}"
            )));
        }
        return Ok(Graph::empty(0));
    }
    let spec = SbmSpec {
        k: 1,
        cluster_size: n,
        p,
        q: 0.0,
        rng_seed,
    };
    Ok(sbm(&spec)?.0)
}

/// Planted cluster of vertex `v` in a graph from [`sbm`].
pub fn planted_label(spec: &SbmSpec, v: VertexId) -> usize {
    v as usize / spec.cluster_size
}
