//! Fusion of per-strategy closeness scores into one model ranking.
//!
//! The soft ensemble averages closeness across strategies. The hard ensemble
//! turns each strategy column into points (`m + 1 - rank`) and sums them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcdm::{entropy_weights, topsis, TopsisResult, WeightVector};
use crate::metrics::DecisionMatrix;
use crate::rank::{competition_ranks, competition_ranks_by};

/// Closeness of `m` models under `T` training strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessTable {
    models: Vec<String>,
    strategies: Vec<String>,
    /// Row-major `m x T`.
    values: Vec<f64>,
}

impl ClosenessTable {
    pub fn new(models: Vec<String>, strategies: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::InvalidInput("closeness table has no models".into()));
        }
        if strategies.is_empty() {
            return Err(Error::InvalidInput(
                "closeness table has no strategies".into(),
            ));
        }
        if values.len() != models.len() * strategies.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} closeness values, got {}",
                models.len() * strategies.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidInput(format!(
                "closeness must lie in [0, 1], got {v}"
            )));
        }
        unique(&models, "model")?;
        unique(&strategies, "strategy")?;
        Ok(Self {
            models,
            strategies,
            values,
        })
    }

    /// Builds a table from one closeness column per strategy.
    pub fn from_columns(
        models: Vec<String>,
        strategies: Vec<String>,
        columns: &[Vec<f64>],
    ) -> Result<Self> {
        if columns.len() != strategies.len() {
            return Err(Error::InvalidInput(format!(
                "{} columns for {} strategies",
                columns.len(),
                strategies.len()
            )));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != models.len()) {
            return Err(Error::InvalidInput(format!(
                "closeness column has {} values for {} models",
                c.len(),
                models.len()
            )));
        }
        let values = (0..models.len())
            .flat_map(|i| columns.iter().map(move |c| c[i]))
            .collect();
        Self::new(models, strategies, values)
    }

    /// Builds a table from `(model, strategy, closeness)` cells. Models and
    /// strategies keep their first-seen order; every cell must appear once.
    pub fn from_cells(cells: &[(String, String, f64)]) -> Result<Self> {
        let mut models: Vec<String> = Vec::new();
        let mut strategies: Vec<String> = Vec::new();
        for (m, s, _) in cells {
            if !models.contains(m) {
                models.push(m.clone());
            }
            if !strategies.contains(s) {
                strategies.push(s.clone());
            }
        }
        let t = strategies.len();
        let mut values = vec![None; models.len() * t];
        for (m, s, c) in cells {
            let i = models.iter().position(|x| x == m).unwrap_or_default();
            let j = strategies.iter().position(|x| x == s).unwrap_or_default();
            if values[i * t + j].replace(*c).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate closeness for model {m:?} strategy {s:?}"
                )));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "missing closeness for model {:?} strategy {:?}",
                        models[k / t],
                        strategies[k % t]
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Self::new(models, strategies, values)
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn strategies(&self) -> &[String] {
        &self.strategies
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn n_strategies(&self) -> usize {
        self.strategies.len()
    }

    pub fn get(&self, model: usize, strategy: usize) -> f64 {
        self.values[model * self.strategies.len() + strategy]
    }

    pub fn column(&self, strategy: usize) -> Vec<f64> {
        (0..self.models.len())
            .map(|i| self.get(i, strategy))
            .collect()
    }
}

fn unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidInput(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(())
}

/// When two closeness values count as tied for hard-ensemble points.
///
/// Values are first rounded to `decimals` places (when set), then values
/// within `eps` of each other are clustered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TiePolicy {
    pub decimals: Option<u32>,
    pub eps: f64,
}

impl Default for TiePolicy {
    fn default() -> Self {
        Self {
            decimals: Some(2),
            eps: 0.0,
        }
    }
}

impl TiePolicy {
    /// Exact comparison at full precision.
    pub fn exact() -> Self {
        Self {
            decimals: None,
            eps: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::Config(format!(
                "tie eps must be >= 0, got {}",
                self.eps
            )));
        }
        if matches!(self.decimals, Some(d) if d > 15) {
            return Err(Error::Config("tie decimals must be at most 15".into()));
        }
        Ok(())
    }

    fn key(&self, v: f64) -> f64 {
        match self.decimals {
            Some(d) => {
                let scale = 10f64.powi(d as i32);
                (v * scale).round() / scale
            }
            None => v,
        }
    }

    /// Competition ranks of one column under this policy.
    pub fn ranks(&self, column: &[f64]) -> Vec<usize> {
        let keys: Vec<f64> = column.iter().map(|&v| self.key(v)).collect();
        let eps = self.eps;
        // a small allowance absorbs the representation error of rounded keys
        let slack = if self.decimals.is_some() { 1e-12 } else { 0.0 };
        competition_ranks_by(&keys, |a, b| (a - b).abs() <= eps + slack)
    }
}

/// Mean closeness per model and its competition ranks.
pub fn soft_ensemble(ct: &ClosenessTable) -> (Vec<f64>, Vec<usize>) {
    let t = ct.n_strategies() as f64;
    let scores: Vec<f64> = (0..ct.n_models())
        .map(|i| (0..ct.n_strategies()).map(|j| ct.get(i, j)).sum::<f64>() / t)
        .collect();
    let ranks = competition_ranks(&scores);
    (scores, ranks)
}

/// Points per model (rows) and strategy (columns): `m + 1 - rank`.
pub fn hard_points(ct: &ClosenessTable, policy: &TiePolicy) -> Vec<Vec<usize>> {
    let m = ct.n_models();
    let columns: Vec<Vec<usize>> = (0..ct.n_strategies())
        .map(|j| {
            policy
                .ranks(&ct.column(j))
                .into_iter()
                .map(|r| m + 1 - r)
                .collect()
        })
        .collect();
    (0..m)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

/// Total points per model and their competition ranks.
pub fn hard_ensemble(ct: &ClosenessTable, policy: &TiePolicy) -> (Vec<usize>, Vec<usize>) {
    let totals: Vec<usize> = hard_points(ct, policy)
        .iter()
        .map(|row| row.iter().sum())
        .collect();
    let as_f64: Vec<f64> = totals.iter().map(|&t| t as f64).collect();
    (totals, competition_ranks(&as_f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub models: Vec<String>,
    pub strategies: Vec<String>,
    pub soft_scores: Vec<f64>,
    pub soft_ranks: Vec<usize>,
    pub hard_points: Vec<Vec<usize>>,
    pub hard_totals: Vec<usize>,
    pub hard_ranks: Vec<usize>,
    pub soft_best: String,
    pub hard_best: String,
    /// Human-readable notes on how ties for the top spots were broken.
    pub tie_breaks: Vec<String>,
}

/// Index of the best model under `primary` (higher wins), then `secondary`,
/// then lexicographically smallest name. Returns a note when a tie was broken.
fn pick_best(
    names: &[String],
    primary: &[f64],
    secondary: &[f64],
    label: &str,
) -> (usize, Option<String>) {
    let top = primary.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..names.len()).filter(|&i| primary[i] == top).collect();
    if tied.len() == 1 {
        return (tied[0], None);
    }
    let best = *tied
        .iter()
        .max_by(|&&a, &&b| {
            secondary[a]
                .total_cmp(&secondary[b])
                .then_with(|| names[b].cmp(&names[a]))
        })
        .unwrap_or(&tied[0]);
    let tied_names: Vec<&str> = tied.iter().map(|&i| names[i].as_str()).collect();
    let note = format!(
        "{label}: tie between {} broken in favour of {}",
        tied_names.join(", "),
        names[best]
    );
    (best, Some(note))
}

/// Runs both ensembles. Ties for `soft_best` are broken by hard totals and
/// ties for `hard_best` by soft scores, then by model name; every broken tie
/// is recorded in `tie_breaks`.
pub fn ensemble(ct: &ClosenessTable, policy: &TiePolicy) -> Result<EnsembleResult> {
    policy.validate()?;
    let (soft_scores, soft_ranks) = soft_ensemble(ct);
    let points = hard_points(ct, policy);
    let (hard_totals, hard_ranks) = hard_ensemble(ct, policy);
    let totals_f: Vec<f64> = hard_totals.iter().map(|&t| t as f64).collect();

    let mut tie_breaks = Vec::new();
    let (soft_idx, note) = pick_best(ct.models(), &soft_scores, &totals_f, "soft_best");
    tie_breaks.extend(note);
    let (hard_idx, note) = pick_best(ct.models(), &totals_f, &soft_scores, "hard_best");
    tie_breaks.extend(note);

    Ok(EnsembleResult {
        models: ct.models().to_vec(),
        strategies: ct.strategies().to_vec(),
        soft_scores,
        soft_ranks,
        hard_points: points,
        hard_totals,
        hard_ranks,
        soft_best: ct.models()[soft_idx].clone(),
        hard_best: ct.models()[hard_idx].clone(),
        tie_breaks,
    })
}

/// Entropy weights and TOPSIS outcome of one strategy's decision matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRanking {
    pub strategy: String,
    /// The matrix with rows in canonical (sorted) model order.
    pub matrix: DecisionMatrix,
    pub weights: WeightVector,
    pub topsis: TopsisResult,
}

/// Everything produced by ranking a set of strategy matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub strategies: Vec<StrategyRanking>,
    pub closeness: ClosenessTable,
    pub ensemble: EnsembleResult,
}

/// Weights and ranks each strategy's matrix, then fuses the closeness
/// columns. Rows are put in sorted model order first, so the report does not
/// depend on row order in the inputs. All matrices must cover the same
/// models and the same criteria. `weights` overrides the entropy weights
/// for every strategy when given.
pub fn rank_strategies(
    blocks: &[(String, DecisionMatrix)],
    weights: Option<&WeightVector>,
    policy: &TiePolicy,
) -> Result<RankingReport> {
    let (_, first) = blocks
        .first()
        .ok_or_else(|| Error::InvalidInput("no decision matrices to rank".into()))?;
    let mut models = first.alternatives().to_vec();
    models.sort();
    let mut strategies = Vec::with_capacity(blocks.len());
    for (strategy, dm) in blocks {
        let mut these = dm.alternatives().to_vec();
        these.sort();
        if these != models {
            return Err(Error::InvalidInput(format!(
                "strategy {strategy:?} covers models {these:?}, expected {models:?}"
            )));
        }
        if dm.criteria() != first.criteria() {
            return Err(Error::InvalidInput(format!(
                "strategy {strategy:?} uses different criteria from the first matrix"
            )));
        }
        let order: Vec<usize> = models
            .iter()
            .map(|m| {
                dm.alternatives()
                    .iter()
                    .position(|a| a == m)
                    .unwrap_or_default()
            })
            .collect();
        let matrix = dm.permute_rows(&order)?;
        let w = match weights {
            Some(w) => w.clone(),
            None => entropy_weights(&matrix)?,
        };
        let result = topsis(&matrix, &w)?;
        strategies.push(StrategyRanking {
            strategy: strategy.clone(),
            matrix,
            weights: w,
            topsis: result,
        });
    }
    let columns: Vec<Vec<f64>> = strategies
        .iter()
        .map(|s| s.topsis.closeness.clone())
        .collect();
    let closeness = ClosenessTable::from_columns(
        models,
        strategies.iter().map(|s| s.strategy.clone()).collect(),
        &columns,
    )?;
    let ensemble = ensemble(&closeness, policy)?;
    Ok(RankingReport {
        strategies,
        closeness,
        ensemble,
    })
}
