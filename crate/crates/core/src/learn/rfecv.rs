use super::{stratified_kfold, Dataset, ModelSpec};
use crate::error::{Error, Result};
use crate::metrics::auc;

#[derive(Debug, Clone, PartialEq)]
pub struct RfecvResult {
    /// Features kept at the best size.
    pub mask: Vec<bool>,
    /// `(n_features, mean cross-validated AUC)` in elimination order.
    pub curve: Vec<(usize, f64)>,
}

impl RfecvResult {
    pub fn n_selected(&self) -> usize {
        self.mask.iter().filter(|&&k| k).count()
    }
}

fn mean_cv_auc(ds: &Dataset, spec: &ModelSpec, k_folds: usize, seed: u64) -> Result<f64> {
    let plan = stratified_kfold(ds.labels(), k_folds, seed)?;
    let hyper = spec.fixed();
    let mut total = 0.0;
    for fold in 0..k_folds {
        let (tr, te) = plan.split(fold);
        let test = ds.subset(&te);
        let model = spec.fit(&ds.subset(&tr), &hyper)?;
        total += auc(test.labels(), &model.predict(test.features()))?;
    }
    Ok(total / k_folds as f64)
}

/// Recursive feature elimination with cross-validation. At each size the
/// mean stratified k-fold AUC is recorded, the estimator is refitted on all
/// samples and the `step` least important features are dropped (never going
/// below one feature). The size with the best score wins; the smallest size
/// wins ties.
pub fn rfecv(
    ds: &Dataset,
    estimator: &ModelSpec,
    step: usize,
    k_folds: usize,
    seed: u64,
) -> Result<RfecvResult> {
    estimator.validate()?;
    ds.require_both_classes()?;
    let d = ds.n_features();
    if step == 0 || step >= d {
        return Err(Error::Config(format!(
            "elimination step must lie in 1..{d} for {d} features, got {step}"
        )));
    }

    let mut active: Vec<usize> = (0..d).collect();
    let mut curve = Vec::new();
    let mut masks = Vec::new();
    loop {
        let mut mask = vec![false; d];
        active.iter().for_each(|&j| mask[j] = true);
        let view = ds.select_features(&mask)?;
        curve.push((active.len(), mean_cv_auc(&view, estimator, k_folds, seed)?));
        masks.push(mask);
        if active.len() == 1 {
            break;
        }
        let model = estimator.fit(&view, &estimator.fixed())?;
        let importance = model.importance().ok_or_else(|| {
            Error::InvalidInput(format!(
                "{} does not provide feature importances",
                estimator.name()
            ))
        })?;
        let drop = step.min(active.len() - 1);
        let mut order: Vec<usize> = (0..active.len()).collect();
        order.sort_by(|&a, &b| importance[a].total_cmp(&importance[b]).then(a.cmp(&b)));
        let mut removed: Vec<usize> = order[..drop].to_vec();
        removed.sort_unstable();
        for pos in removed.into_iter().rev() {
            active.remove(pos);
        }
    }

    let best = (0..curve.len())
        .max_by(|&a, &b| {
            curve[a]
                .1
                .total_cmp(&curve[b].1)
                .then(curve[b].0.cmp(&curve[a].0))
        })
        .unwrap_or(0);
    Ok(RfecvResult {
        mask: masks.swap_remove(best),
        curve,
    })
}
