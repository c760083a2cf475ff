//! Sparse symmetric matrices and the normalized Laplacian.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    offsets: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.columns[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, out) in y.iter_mut().enumerate() {
            *out = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }
}

/// `N = I - D^{-1/2} A D^{-1/2}`.
///
/// A self-loop of weight `w` enters the adjacency matrix as `2w` on the
/// diagonal, consistent with its contribution to the degree. That keeps
/// `D^{1/2} 1` in the kernel and the spectrum inside `[0, 2]`.
pub fn normalized_laplacian(g: &Graph) -> Result<SparseMatrix> {
    let n = g.num_vertices();
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegreeVertex(v as u64));
    }
    let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();

    let mut offsets = Vec::with_capacity(n + 1);
    let mut columns = Vec::new();
    let mut values = Vec::new();
    offsets.push(0);
    // Rows are sorted, so a self-loop is seen before the diagonal is emitted.
    for u in 0..n {
        let mut diagonal = 1.0;
        let mut wrote_diagonal = false;
        for nb in g.row(u as u64) {
            let v = nb.id as usize;
            if v == u {
                diagonal -= 2.0 * nb.weight * inv_sqrt[u] * inv_sqrt[u];
                continue;
            }
            if v > u && !wrote_diagonal {
                columns.push(u);
                values.push(diagonal);
                wrote_diagonal = true;
            }
            columns.push(v);
            values.push(-nb.weight * inv_sqrt[u] * inv_sqrt[v]);
        }
        if !wrote_diagonal {
            columns.push(u);
            values.push(diagonal);
        }
        offsets.push(values.len());
    }
    Ok(SparseMatrix {
        n,
        offsets,
        columns,
        values,
    })
}
