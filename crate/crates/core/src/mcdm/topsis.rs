use super::WeightVector;
use crate::error::{Error, Result};
use crate::metrics::{CriterionSpec, DecisionMatrix, Direction};
use crate::rank::competition_ranks;

#[derive(Debug, Clone, PartialEq)]
pub struct TopsisResult {
    /// Vector-normalized, weighted matrix, one row per alternative.
    pub weighted: Vec<Vec<f64>>,
    pub ideal_best: Vec<f64>,
    pub ideal_worst: Vec<f64>,
    /// `(S+, S-)` per alternative.
    pub separations: Vec<(f64, f64)>,
    pub closeness: Vec<f64>,
    pub ranks: Vec<usize>,
    /// Every alternative coincided with both ideals; closeness was set to 0.5.
    pub all_identical: bool,
    /// Criteria whose column was entirely zero and normalized to zeros.
    pub zero_columns: Vec<usize>,
}

/// Positive and negative ideal solutions of a weighted matrix. The positive
/// ideal takes the column maximum for benefit criteria and the minimum for
/// cost criteria; the negative ideal does the reverse.
pub fn ideal_solutions(weighted: &[Vec<f64>], criteria: &[CriterionSpec]) -> (Vec<f64>, Vec<f64>) {
    let mut best = Vec::with_capacity(criteria.len());
    let mut worst = Vec::with_capacity(criteria.len());
    for (j, c) in criteria.iter().enumerate() {
        let (lo, hi) = weighted
            .iter()
            .map(|row| row[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        match c.direction {
            Direction::Benefit => {
                best.push(hi);
                worst.push(lo);
            }
            Direction::Cost => {
                best.push(lo);
                worst.push(hi);
            }
        }
    }
    (best, worst)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Ranks alternatives by relative closeness `S- / (S+ + S-)` to the ideal.
pub fn topsis(dm: &DecisionMatrix, weights: &WeightVector) -> Result<TopsisResult> {
    let (m, n) = (dm.n_alternatives(), dm.n_criteria());
    if weights.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} weights for {n} criteria",
            weights.len()
        )));
    }
    let w = weights.as_slice();

    let mut zero_columns = Vec::new();
    let norms: Vec<f64> = (0..n)
        .map(|j| {
            let norm = dm.column(j).iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                zero_columns.push(j);
            }
            norm
        })
        .collect();
    let weighted: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if norms[j] == 0.0 {
                        0.0
                    } else {
                        dm.get(i, j) / norms[j] * w[j]
                    }
                })
                .collect()
        })
        .collect();

    let (ideal_best, ideal_worst) = ideal_solutions(&weighted, dm.criteria());
    let separations: Vec<(f64, f64)> = weighted
        .iter()
        .map(|row| (distance(row, &ideal_best), distance(row, &ideal_worst)))
        .collect();

    let all_identical = separations.iter().any(|&(p, q)| p + q == 0.0);
    let closeness: Vec<f64> = if all_identical {
        vec![0.5; m]
    } else {
        separations.iter().map(|&(p, q)| q / (p + q)).collect()
    };
    let ranks = competition_ranks(&closeness);

    Ok(TopsisResult {
        weighted,
        ideal_best,
        ideal_worst,
        separations,
        closeness,
        ranks,
        all_identical,
        zero_columns,
    })
}
