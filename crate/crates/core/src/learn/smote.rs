use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::squared_distance;
use crate::error::{Error, Result};

/// Indices of the `k` nearest other rows of `i`, ties broken by index.
fn nearest(rows: &[Vec<f64>], i: usize, k: usize) -> Vec<usize> {
    let mut others: Vec<(f64, usize)> = (0..rows.len())
        .filter(|&j| j != i)
        .map(|j| (squared_distance(&rows[i], &rows[j]), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    others.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Synthesizes `target_count - M` minority rows by interpolating between a
/// randomly chosen minority row and one of its `k_neighbors` nearest minority
/// neighbours: `x + u * (nn - x)` with `u ~ U[0, 1)`.
pub fn smote(
    minority: &[Vec<f64>],
    target_count: usize,
    k_neighbors: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let m = minority.len();
    if target_count < m {
        return Err(Error::InvalidInput(format!(
            "SMOTE target {target_count} is below the {m} existing minority samples"
        )));
    }
    if k_neighbors == 0 {
        return Err(Error::Config("SMOTE needs at least one neighbour".into()));
    }
    let n_new = target_count - m;
    if n_new == 0 {
        return Ok(Vec::new());
    }
    if m <= k_neighbors {
        return Err(Error::InvalidInput(format!(
            "SMOTE with {k_neighbors} neighbours needs more than {k_neighbors} minority samples, got {m}"
        )));
    }

    let neighbours: Vec<Vec<usize>> = (0..m).map(|i| nearest(minority, i, k_neighbors)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let synthetic = (0..n_new)
        .map(|_| {
            let i = rng.random_range(0..m);
            let j = neighbours[i][rng.random_range(0..k_neighbors)];
            let u: f64 = rng.random();
            minority[i]
                .iter()
                .zip(&minority[j])
                .map(|(x, n)| x + u * (n - x))
                .collect()
        })
        .collect();
    Ok(synthetic)
}
