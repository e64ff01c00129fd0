use crate::error::{Error, Result};
use crate::metrics::DecisionMatrix;

/// Non-negative criterion weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    /// Shannon entropy per criterion, when the weights were derived from data.
    entropies: Option<Vec<f64>>,
}

impl WeightVector {
    /// Validates explicit weights: finite, non-negative and summing to 1
    /// within 1e-9.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("weight vector is empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidInput(format!(
                "weights must be finite and non-negative, got {w}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            weights,
            entropies: None,
        })
    }

    /// Scales non-negative raw weights so they sum to one.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        if let Some(w) = raw.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidInput(format!(
                "weights must be finite and non-negative, got {w}"
            )));
        }
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidInput("weights sum to zero".into()));
        }
        Self::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entropies(&self) -> Option<&[f64]> {
        self.entropies.as_deref()
    }
}

/// Normalized entropy of one column. Values are min-max standardized, turned
/// into proportions and scored as `-(1/ln m) * sum(p ln p)` with `0 ln 0 = 0`.
/// A constant column has entropy 1.
fn column_entropy(column: &[f64]) -> f64 {
    let m = column.len() as f64;
    let (lo, hi) = column
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if !(range > 0.0) {
        return 1.0;
    }
    let standardized: Vec<f64> = column.iter().map(|&v| (v - lo) / range).collect();
    let total: f64 = standardized.iter().sum();
    let h: f64 = standardized
        .iter()
        .map(|&x| {
            let p = x / total;
            if p > 0.0 {
                p * p.ln()
            } else {
                0.0
            }
        })
        .sum();
    -h / m.ln()
}

/// Objective criterion weights from the dispersion of each column:
/// `w_j = (1 - E_j) / sum_k (1 - E_k)`.
pub fn entropy_weights(dm: &DecisionMatrix) -> Result<WeightVector> {
    let entropies: Vec<f64> = (0..dm.n_criteria())
        .map(|j| column_entropy(&dm.column(j)))
        .collect();
    let divergence: Vec<f64> = entropies.iter().map(|e| (1.0 - e).max(0.0)).collect();
    let total: f64 = divergence.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate(
            "every criterion is constant across alternatives; entropy weights are undefined".into(),
        ));
    }
    Ok(WeightVector {
        weights: divergence.iter().map(|d| d / total).collect(),
        entropies: Some(entropies),
    })
}
