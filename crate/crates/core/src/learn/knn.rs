use super::{squared_distance, Dataset, Standardizer};
use crate::error::{Error, Result};

/// k-nearest-neighbour scorer on standardized features.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    scaler: Standardizer,
    rows: Vec<Vec<f64>>,
    labels: Vec<u8>,
    k: usize,
}

pub fn train_knn(train: &Dataset, n_neighbors: usize) -> Result<KnnModel> {
    if train.is_empty() {
        return Err(Error::InvalidInput("k-NN training set is empty".into()));
    }
    if n_neighbors == 0 || n_neighbors > train.len() {
        return Err(Error::InvalidInput(format!(
            "k-NN needs 1 <= k <= {} training samples, got k = {n_neighbors}",
            train.len()
        )));
    }
    let scaler = Standardizer::fit(train.features())?;
    Ok(KnnModel {
        rows: scaler.transform(train.features()),
        scaler,
        labels: train.labels().to_vec(),
        k: n_neighbors,
    })
}

/// Fraction of the `k` nearest training rows labelled positive. Distance
/// ties are broken by training order.
pub fn predict_knn(model: &KnnModel, features: &[Vec<f64>]) -> Vec<f64> {
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(model.rows.len());
    features
        .iter()
        .map(|q| {
            let q = model.scaler.transform_row(q);
            dist.clear();
            dist.extend(
                model
                    .rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| (squared_distance(&q, r), i)),
            );
            let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if model.k < dist.len() {
                dist.select_nth_unstable_by(model.k - 1, cmp);
            }
            let positives = dist[..model.k]
                .iter()
                .filter(|(_, i)| model.labels[*i] == 1)
                .count();
            positives as f64 / model.k as f64
        })
        .collect()
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }
}
