//! Global spectral clustering.
//!
//! Embed each vertex with the eigenvectors of the normalized Laplacian that
//! belong to the `k` smallest eigenvalues, normalize the embedding rows, and
//! group them with k-means.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cluster::kmeans::kmeans;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::{normalized_laplacian, SparseMatrix};

/// Graphs up to this many vertices use a dense eigendecomposition.
pub const DENSE_EIGEN_LIMIT: usize = 500;
pub const EIGEN_TOLERANCE: f64 = 1e-8;
pub const EIGEN_MAX_ITERATIONS: usize = 1000;

/// Partition all vertices into `k` clusters. Returns one label in `0..k` per
/// vertex; labels are numbered in order of first appearance.
pub fn spectral_cluster(g: &Graph, k: usize, rng_seed: u64) -> Result<Vec<usize>> {
    let n = g.num_vertices();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "number of clusters must lie in 1..={n}, got {k}"
        )));
    }
    let laplacian = normalized_laplacian(g)?;
    if k == 1 {
        return Ok(vec![0; n]);
    }
    let mut embedding = smallest_eigenvectors(&laplacian, k)?;
    for mut row in embedding.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    Ok(kmeans(&embedding, k, rng_seed))
}

/// Eigenvectors (as columns) for the `k` smallest eigenvalues of a symmetric
/// matrix whose spectrum lies in `[0, 2]`.
pub fn smallest_eigenvectors(m: &SparseMatrix, k: usize) -> Result<DMatrix<f64>> {
    let n = m.dim();
    assert!(k >= 1 && k <= n);
    if n <= DENSE_EIGEN_LIMIT {
        return Ok(dense_smallest(m, k));
    }
    subspace_iteration(m, k)
}

fn dense_smallest(m: &SparseMatrix, k: usize) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let columns: Vec<DVector<f64>> = order[..k]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    DMatrix::from_columns(&columns)
}

/// Block power iteration on `2I - M` with Rayleigh-Ritz, which turns the
/// smallest eigenvalues of `M` into the dominant ones.
fn subspace_iteration(m: &SparseMatrix, k: usize) -> Result<DMatrix<f64>> {
    let n = m.dim();
    let block = n.min((2 * k).max(k + 8));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut x = DMatrix::from_fn(n, block, |_, _| StandardNormal.sample(&mut rng));
    let mut column = vec![0.0; n];

    let apply = |x: &DMatrix<f64>, out: &mut DMatrix<f64>, scratch: &mut Vec<f64>| {
        for j in 0..x.ncols() {
            let col = x.column(j);
            m.mul_vec(col.as_slice(), scratch);
            for i in 0..n {
                out[(i, j)] = 2.0 * col[i] - scratch[i];
            }
        }
    };

    let mut y = DMatrix::zeros(n, block);
    for _ in 0..EIGEN_MAX_ITERATIONS {
        let q = x.clone().qr().q();
        apply(&q, &mut y, &mut column);
        let h = q.transpose() * &y;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vectors = DMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        let ritz = &q * &vectors;
        let image = &y * &vectors;

        let converged = (0..k).all(|j| {
            let theta = eig.eigenvalues[order[j]];
            (image.column(j) - ritz.column(j) * theta).norm() <= EIGEN_TOLERANCE
        });
        if converged {
            return Ok(ritz.columns(0, k).into_owned());
        }
        x = image;
    }
    Err(Error::EigensolverFailure(format!(
        "subspace iteration did not reach tolerance {EIGEN_TOLERANCE} in {EIGEN_MAX_ITERATIONS} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::metrics::adjusted_rand_index;

    fn cliques(count: usize, size: usize) -> Graph {
        let mut edges = Vec::new();
        for c in 0..count {
            let base = (c * size) as u64;
            for a in 0..size as u64 {
                for b in a + 1..size as u64 {
                    edges.push((base + a, base + b, 1.0));
                }
            }
        }
        Graph::from_edges(edges).unwrap()
    }

    #[test]
    fn k_one_is_all_zero() {
        let g = cliques(2, 3);
        assert_eq!(spectral_cluster(&g, 1, 0).unwrap(), vec![0; 6]);
    }

    #[test]
    fn separates_disjoint_cliques() {
        let labels = spectral_cluster(&cliques(2, 10), 2, 5).unwrap();
        let expected: Vec<usize> = (0..20).map(|i| i / 10).collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn rejects_bad_k_and_isolated_vertices() {
        let g = cliques(2, 3);
        assert!(spectral_cluster(&g, 0, 0).is_err());
        assert!(spectral_cluster(&g, 7, 0).is_err());
        let g = Graph::from_edges([(0, 2, 1.0)]).unwrap();
        assert!(matches!(
            spectral_cluster(&g, 2, 0),
            Err(Error::ZeroDegreeVertex(1))
        ));
    }

    #[test]
    fn iterative_solver_matches_dense() {
        // ring of 4 cliques joined by single edges, large enough for the iterative path
        let size = 130;
        let mut edges = Vec::new();
        for c in 0..4u64 {
            let base = c * size;
            for a in 0..size {
                for b in a + 1..size {
                    if (a * 7 + b * 3) % 5 != 0 {
                        edges.push((base + a, base + b, 1.0));
                    }
                }
            }
            edges.push((base, ((c + 1) % 4) * size + 1, 1.0));
        }
        let g = Graph::from_edges(edges).unwrap();
        let lap = normalized_laplacian(&g).unwrap();
        assert!(lap.dim() > DENSE_EIGEN_LIMIT);
        let iterative = subspace_iteration(&lap, 4).unwrap();
        let dense = dense_smallest(&lap, 4);
        // same invariant subspace: projecting one basis onto the other loses nothing
        let overlap = dense.transpose() * &iterative;
        let sv = overlap.singular_values();
        for s in sv.iter() {
            assert!((s - 1.0).abs() < 1e-6, "{sv}");
        }

        let labels = spectral_cluster(&g, 4, 1).unwrap();
        let truth: Vec<usize> = (0..4 * size as usize).map(|i| i / size as usize).collect();
        assert_eq!(adjusted_rand_index(&labels, &truth), 1.0);
    }
}
