//! In-repo training machinery: stratified folds, SMOTE, two reference
//! classifiers, nested grid search and recursive feature elimination.

mod dataset;
mod folds;
mod knn;
mod logreg;
mod model;
mod rfecv;
mod scale;
mod smote;
mod strategy;

pub use dataset::Dataset;
pub use folds::{stratified_kfold, FoldPlan};
pub use knn::{predict_knn, train_knn, KnnModel};
pub use logreg::{
    logreg_gradient, logreg_objective, predict_logreg, train_logreg, LogRegConfig, LogRegModel,
};
pub use model::{Hyper, ModelKind, ModelSpec, TrainedModel};
pub use rfecv::{rfecv, RfecvResult};
pub use scale::Standardizer;
pub use smote::smote;
pub use strategy::{run_strategy, HyperparamMode, RunConfig, StrategyConfig, StrategyRun};

/// Derives an independent stream seed from a base seed and a tag.
pub(crate) fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = seed
        .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
