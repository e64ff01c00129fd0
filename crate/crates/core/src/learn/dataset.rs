use std::collections::HashSet;

use crate::error::{Error, Result};

/// Labelled feature rows. Label `1` is the positive (COVID-19) class.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
    sample_ids: Vec<String>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>, sample_ids: Vec<String>) -> Result<Self> {
        if features.len() != labels.len() || features.len() != sample_ids.len() {
            return Err(Error::InvalidInput(format!(
                "{} feature rows, {} labels, {} sample ids",
                features.len(),
                labels.len(),
                sample_ids.len()
            )));
        }
        let d = features.first().map_or(0, Vec::len);
        for (row, id) in features.iter().zip(&sample_ids) {
            if row.len() != d {
                return Err(Error::InvalidInput(format!(
                    "sample {id:?} has {} features, expected {d}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "sample {id:?} has a non-finite feature"
                )));
            }
        }
        if !features.is_empty() && d == 0 {
            return Err(Error::InvalidInput("samples have no features".into()));
        }
        if let Some((l, id)) = labels.iter().zip(&sample_ids).find(|(l, _)| **l > 1) {
            return Err(Error::InvalidInput(format!(
                "sample {id:?} has label {l}, expected 0 or 1"
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = sample_ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::InvalidInput(format!("duplicate sample id {dup:?}")));
        }
        Ok(Self {
            features,
            labels,
            sample_ids,
        })
    }

    /// Dataset with generated ids `s00000, s00001, ...`.
    pub fn from_rows(features: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        let ids = (0..features.len()).map(|i| format!("s{i:05}")).collect();
        Self::new(features, labels, ids)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (self.len() - pos, pos)
    }

    pub fn require_both_classes(&self) -> Result<()> {
        let (neg, pos) = self.class_counts();
        if neg == 0 || pos == 0 {
            return Err(Error::InvalidInput(format!(
                "training needs both classes, got {neg} negatives and {pos} positives"
            )));
        }
        Ok(())
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            sample_ids: indices
                .iter()
                .map(|&i| self.sample_ids[i].clone())
                .collect(),
        }
    }

    /// Appends rows that share one label. Their ids are generated and never
    /// serialized.
    pub(crate) fn with_synthetic(&self, rows: Vec<Vec<f64>>, label: u8) -> Dataset {
        let mut out = self.clone();
        let start = out.len();
        out.sample_ids
            .extend((0..rows.len()).map(|i| format!("synthetic:{}", start + i)));
        out.labels.extend(std::iter::repeat_n(label, rows.len()));
        out.features.extend(rows);
        out
    }

    /// Keeps the feature columns where `mask` is true.
    pub fn select_features(&self, mask: &[bool]) -> Result<Dataset> {
        if mask.len() != self.n_features() {
            return Err(Error::InvalidInput(format!(
                "feature mask has {} entries for {} features",
                mask.len(),
                self.n_features()
            )));
        }
        if !mask.contains(&true) {
            return Err(Error::InvalidInput("feature mask selects nothing".into()));
        }
        let features = self
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .zip(mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&v, _)| v)
                    .collect()
            })
            .collect();
        Ok(Dataset {
            features,
            labels: self.labels.clone(),
            sample_ids: self.sample_ids.clone(),
        })
    }
}
