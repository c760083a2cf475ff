use std::collections::HashMap;

use crate::graph::VertexId;

fn choose2(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand Index between two labelings of the same items. 1 means the
/// partitions are identical up to renaming labels.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must have equal length");
    let n = a.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| choose2(c)).sum();
    let expected = sum_rows * sum_cols / choose2(n).max(1.0);
    let max_index = (sum_rows + sum_cols) / 2.0;
    if max_index == expected {
        // both partitions trivial in the same way
        return 1.0;
    }
    (index - expected) / (max_index - expected)
}

/// Fraction of `cluster` whose planted label equals `label`.
pub fn precision(cluster: &[VertexId], labels: &[usize], label: usize) -> f64 {
    if cluster.is_empty() {
        return 0.0;
    }
    let hits = cluster
        .iter()
        .filter(|&&v| labels.get(v as usize) == Some(&label))
        .count();
    hits as f64 / cluster.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ari_is_permutation_invariant() {
        let a = [0, 0, 1, 1, 2, 2];
        let b = [2, 2, 0, 0, 1, 1];
        assert_eq!(adjusted_rand_index(&a, &b), 1.0);
    }

    #[test]
    fn ari_known_value() {
        // scikit-learn: adjusted_rand_score([0,0,1,1],[0,0,1,2]) = 0.5714285714285715
        let v = adjusted_rand_index(&[0, 0, 1, 1], &[0, 0, 1, 2]);
        assert!((v - 4.0 / 7.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn ari_of_trivial_partitions() {
        assert_eq!(adjusted_rand_index(&[0, 0, 0], &[1, 1, 1]), 1.0);
    }

    #[test]
    fn precision_counts_matches() {
        assert_eq!(precision(&[0, 1, 5], &[0, 0, 0, 1, 1, 1], 0), 2.0 / 3.0);
        assert_eq!(precision(&[], &[0], 0), 0.0);
    }
}
