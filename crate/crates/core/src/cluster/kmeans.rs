//! Lloyd's k-means with k-means++ seeding.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_ITERATIONS: usize = 300;
pub const RELATIVE_TOLERANCE: f64 = 1e-6;

fn squared_distance(points: &DMatrix<f64>, i: usize, center: &DVector<f64>) -> f64 {
    points
        .row(i)
        .iter()
        .zip(center.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

fn seed_centers(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<DVector<f64>> {
    let n = points.nrows();
    let row = |i: usize| points.row(i).transpose();
    let mut centers = vec![row(rng.random_range(0..n))];
    let mut closest: Vec<f64> = (0..n)
        .map(|i| squared_distance(points, i, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = closest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in closest.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let center = row(pick);
        for (i, d) in closest.iter_mut().enumerate() {
            *d = d.min(squared_distance(points, i, &center));
        }
        centers.push(center);
    }
    centers
}

/// Cluster the rows of `points` into `k` groups.
///
/// Labels are renumbered in order of first appearance, so row 0 always gets
/// label 0. Deterministic for a fixed `rng_seed`.
pub fn kmeans(points: &DMatrix<f64>, k: usize, rng_seed: u64) -> Vec<usize> {
    let n = points.nrows();
    assert!(k >= 1 && k <= n, "k must lie in 1..=n");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut centers = seed_centers(points, k, &mut rng);
    let mut labels = vec![0usize; n];
    let mut previous_inertia = f64::INFINITY;

    for _ in 0..MAX_ITERATIONS {
        let mut inertia = 0.0;
        for (i, label) in labels.iter_mut().enumerate() {
            let (best, dist) = centers
                .iter()
                .enumerate()
                .map(|(c, center)| (c, squared_distance(points, i, center)))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            *label = best;
            inertia += dist;
        }

        let mut sums = vec![DVector::zeros(points.ncols()); k];
        let mut counts = vec![0usize; k];
        for (i, &label) in labels.iter().enumerate() {
            sums[label] += points.row(i).transpose();
            counts[label] += 1;
        }
        for c in 0..k {
            // an empty cluster keeps its previous center
            if counts[c] > 0 {
                centers[c] = &sums[c] / counts[c] as f64;
            }
        }

        if (previous_inertia - inertia).abs() <= RELATIVE_TOLERANCE * previous_inertia.max(f64::MIN_POSITIVE)
            || inertia == 0.0
        {
            break;
        }
        previous_inertia = inertia;
    }

    let mut renumber = vec![usize::MAX; k];
    let mut next = 0;
    labels
        .into_iter()
        .map(|l| {
            if renumber[l] == usize::MAX {
                renumber[l] = next;
                next += 1;
            }
            renumber[l]
        })
        .collect()
}
