//! Binary classification criteria and decision-matrix assembly.
//!
//! The positive class is label `1` (COVID-19). A sample is predicted positive
//! when its score is at or above the decision threshold.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub sample_id: String,
    pub label: u8,
    pub score: f64,
}

/// Out-of-fold scores of one (model, strategy) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub model: String,
    pub strategy: String,
    pub entries: Vec<Prediction>,
    pub threshold: f64,
}

impl PredictionSet {
    pub fn new(
        model: impl Into<String>,
        strategy: impl Into<String>,
        entries: Vec<Prediction>,
        threshold: f64,
    ) -> Result<Self> {
        let set = Self {
            model: model.into(),
            strategy: strategy.into(),
            entries,
            threshold,
        };
        set.validate()?;
        Ok(set)
    }

    /// Builds a set from parallel label and score slices with generated ids.
    pub fn from_scores(labels: &[u8], scores: &[f64], threshold: f64) -> Result<Self> {
        if labels.len() != scores.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels but {} scores",
                labels.len(),
                scores.len()
            )));
        }
        let entries = labels
            .iter()
            .zip(scores)
            .enumerate()
            .map(|(i, (&label, &score))| Prediction {
                sample_id: format!("s{i:05}"),
                label,
                score,
            })
            .collect();
        Self::new("model", "1", entries, threshold)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no predictions for model {:?} strategy {:?}",
                self.model, self.strategy
            )));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidInput(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        for p in &self.entries {
            if p.label > 1 {
                return Err(Error::InvalidInput(format!(
                    "sample {:?}: label must be 0 or 1, got {}",
                    p.sample_id, p.label
                )));
            }
            if !p.score.is_finite() || !(0.0..=1.0).contains(&p.score) {
                return Err(Error::InvalidInput(format!(
                    "sample {:?}: score must be finite and in [0, 1], got {}",
                    p.sample_id, p.score
                )));
            }
        }
        Ok(())
    }

    pub fn with_threshold(&self, threshold: f64) -> Self {
        Self {
            threshold,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion_counts(preds: &PredictionSet) -> ConfusionCounts {
    let mut c = ConfusionCounts::default();
    for p in &preds.entries {
        match (p.label == 1, p.score >= preds.threshold) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    c
}

/// The eight evaluation criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Acc,
    Auc,
    Precision,
    Recall,
    Specificity,
    F1,
    Fpr,
    Fnr,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Acc,
        Metric::Auc,
        Metric::Precision,
        Metric::Recall,
        Metric::Specificity,
        Metric::F1,
        Metric::Fpr,
        Metric::Fnr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Acc => "acc",
            Metric::Auc => "auc",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::Specificity => "specificity",
            Metric::F1 => "f1",
            Metric::Fpr => "fpr",
            Metric::Fnr => "fnr",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Metric::Fpr | Metric::Fnr => Direction::Cost,
            _ => Direction::Benefit,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown metric {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Benefit,
    Cost,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "benefit" => Ok(Direction::Benefit),
            "cost" => Ok(Direction::Cost),
            other => Err(Error::InvalidInput(format!(
                "direction must be benefit or cost, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionSpec {
    pub name: String,
    pub direction: Direction,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        Self {
            name: name.into(),
            direction,
        }
    }

    /// The eight criteria with their default directions.
    pub fn defaults() -> Vec<CriterionSpec> {
        Metric::ALL
            .iter()
            .map(|m| CriterionSpec::new(m.name(), m.direction()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub acc: f64,
    pub auc: f64,
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f1: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub counts: ConfusionCounts,
    /// Metrics whose ratio was 0/0 and were reported as 0.
    pub degenerate: Vec<Metric>,
}

impl EvaluationReport {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Acc => self.acc,
            Metric::Auc => self.auc,
            Metric::Precision => self.precision,
            Metric::Recall => self.recall,
            Metric::Specificity => self.specificity,
            Metric::F1 => self.f1,
            Metric::Fpr => self.fpr,
            Metric::Fnr => self.fnr,
        }
    }

    pub fn get_by_name(&self, name: &str) -> Option<f64> {
        name.parse::<Metric>().ok().map(|m| self.get(m))
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }
}

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs ordered correctly, ties counting one half.
/// Computed from average ranks in O(n log n).
pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64> {
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::InvalidInput(
            "AUC needs at least one positive and one negative sample".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg;
            }
        }
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n))
}

fn ratio(num: usize, den: usize, metric: Metric, flags: &mut Vec<Metric>) -> f64 {
    if den == 0 {
        flags.push(metric);
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn evaluate(preds: &PredictionSet) -> Result<EvaluationReport> {
    preds.validate()?;
    let labels: Vec<u8> = preds.entries.iter().map(|p| p.label).collect();
    let scores: Vec<f64> = preds.entries.iter().map(|p| p.score).collect();
    let auc = auc(&labels, &scores)?;
    let c = confusion_counts(preds);

    let mut flags = Vec::new();
    let acc = (c.tp + c.tn) as f64 / c.total() as f64;
    let precision = ratio(c.tp, c.tp + c.fp, Metric::Precision, &mut flags);
    let recall = ratio(c.tp, c.tp + c.fn_, Metric::Recall, &mut flags);
    let specificity = ratio(c.tn, c.tn + c.fp, Metric::Specificity, &mut flags);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        flags.push(Metric::F1);
        0.0
    };
    // complements are taken exactly so fpr + specificity == 1 bit-for-bit
    let fpr = 1.0 - specificity;
    let fnr = 1.0 - recall;

    Ok(EvaluationReport {
        acc,
        auc,
        precision,
        recall,
        specificity,
        f1,
        fpr,
        fnr,
        counts: c,
        degenerate: flags,
    })
}

/// Picks the grid cutoff that optimises `objective` (maximised for benefit
/// metrics, minimised for cost metrics). Ties go to the cutoff nearest 0.5,
/// then to the smaller cutoff. Cutoffs at which the objective is degenerate
/// are skipped.
pub fn threshold_sweep(preds: &PredictionSet, grid: &[f64], objective: Metric) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Config("threshold grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::Config(format!("threshold {bad} outside (0, 1)")));
    }
    let sign = match objective.direction() {
        Direction::Benefit => 1.0,
        Direction::Cost => -1.0,
    };
    let mut best: Option<(f64, f64)> = None;
    for &t in grid {
        let report = evaluate(&preds.with_threshold(t))?;
        if report.degenerate.contains(&objective) {
            continue;
        }
        let value = sign * report.get(objective);
        let better = match best {
            None => true,
            Some((bt, bv)) => {
                value > bv
                    || (value == bv
                        && ((t - 0.5).abs() < (bt - 0.5).abs()
                            || ((t - 0.5).abs() == (bt - 0.5).abs() && t < bt)))
            }
        };
        if better {
            best = Some((t, value));
        }
    }
    best.map(|(t, _)| t).ok_or_else(|| {
        Error::Degenerate(format!(
            "objective {objective} is undefined at every threshold in the grid"
        ))
    })
}

/// The default threshold grid `0.01, 0.02, ..., 0.99`.
pub fn default_threshold_grid() -> Vec<f64> {
    (1..100).map(|i| i as f64 / 100.0).collect()
}

/// Alternatives x criteria score table.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<CriterionSpec>,
    values: Vec<f64>,
}

impl DecisionMatrix {
    /// `values` is row-major, one row per alternative.
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let (m, n) = (alternatives.len(), criteria.len());
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "a decision matrix needs at least 2 alternatives, got {m}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput(
                "a decision matrix needs at least 1 criterion".into(),
            ));
        }
        if values.len() != m * n {
            return Err(Error::InvalidInput(format!(
                "expected {} values for {m}x{n}, got {}",
                m * n,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value for {:?} / {:?}",
                alternatives[pos / n],
                criteria[pos % n].name
            )));
        }
        check_unique(alternatives.iter(), "alternative")?;
        check_unique(criteria.iter().map(|c| &c.name), "criterion")?;
        Ok(Self {
            alternatives,
            criteria,
            values,
        })
    }

    pub fn from_rows(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != criteria.len()) {
            return Err(Error::InvalidInput(format!(
                "row {bad} has {} values, expected {}",
                rows[bad].len(),
                criteria.len()
            )));
        }
        Self::new(alternatives, criteria, rows.concat())
    }

    pub fn n_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn n_criteria(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.criteria.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.criteria.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.alternatives.len())
            .map(|i| self.get(i, j))
            .collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Reorders rows by the given permutation of alternative indices.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = order.iter().map(|&i| self.row(i).to_vec()).collect();
        let names = order
            .iter()
            .map(|&i| self.alternatives[i].clone())
            .collect();
        Self::from_rows(names, self.criteria.clone(), &rows)
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a String>, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidInput(format!("duplicate {what} {name:?}")));
        }
    }
    Ok(())
}

/// One row per model, in input order, one column per requested criterion.
pub fn build_decision_matrix(
    reports: &[(String, EvaluationReport)],
    criteria: &[CriterionSpec],
) -> Result<DecisionMatrix> {
    let mut rows = Vec::with_capacity(reports.len());
    for (model, report) in reports {
        let row = criteria
            .iter()
            .map(|c| {
                report.get_by_name(&c.name).ok_or_else(|| {
                    Error::InvalidInput(format!("model {model:?} has no criterion {:?}", c.name))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    DecisionMatrix::from_rows(
        reports.iter().map(|(m, _)| m.clone()).collect(),
        criteria.to_vec(),
        &rows,
    )
}
