use super::{derive_seed, smote, stratified_kfold, Dataset, Hyper, ModelSpec};
use crate::error::{Error, Result};
use crate::metrics::{
    auc, default_threshold_grid, threshold_sweep, Metric, Prediction, PredictionSet,
};

const TAG_SMOTE: u64 = 1;
const TAG_INNER_FOLDS: u64 = 2;
const TAG_INNER_SMOTE: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperparamMode {
    Fixed,
    NestedGrid { inner_folds: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyConfig {
    pub id: u8,
    pub use_smote: bool,
    pub threshold_moving: bool,
    pub hyperparam_mode: HyperparamMode,
}

impl StrategyConfig {
    /// Strategy 1: no oversampling, fixed hyper-parameters. Strategy 2 adds
    /// SMOTE. Strategy 3 adds nested 5-fold grid search. All three move the
    /// decision threshold.
    pub fn strategy(id: u8) -> Result<Self> {
        let (use_smote, hyperparam_mode) = match id {
            1 => (false, HyperparamMode::Fixed),
            2 => (true, HyperparamMode::Fixed),
            3 => (true, HyperparamMode::NestedGrid { inner_folds: 5 }),
            other => {
                return Err(Error::Config(format!(
                    "strategy must be 1, 2 or 3, got {other}"
                )))
            }
        };
        Ok(Self {
            id,
            use_smote,
            threshold_moving: true,
            hyperparam_mode,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub outer_folds: usize,
    pub smote_k: usize,
    pub threshold_grid: Vec<f64>,
    pub objective: Metric,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            outer_folds: 10,
            smote_k: 5,
            threshold_grid: default_threshold_grid(),
            objective: Metric::F1,
        }
    }
}

/// Out-of-fold predictions plus what was decided along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRun {
    pub predictions: PredictionSet,
    /// Hyper-parameters used in each outer fold.
    pub chosen: Vec<Hyper>,
    /// Clamped SMOTE neighbour counts, unconverged fits and similar events.
    pub notes: Vec<String>,
}

/// Oversamples the minority class of `train` up to the majority count.
fn oversample(train: &Dataset, k: usize, seed: u64, notes: &mut Vec<String>) -> Result<Dataset> {
    let (neg, pos) = train.class_counts();
    if neg == pos {
        return Ok(train.clone());
    }
    let (minority_label, target) = if pos < neg { (1u8, neg) } else { (0u8, pos) };
    let minority: Vec<Vec<f64>> = train
        .features()
        .iter()
        .zip(train.labels())
        .filter(|(_, &l)| l == minority_label)
        .map(|(r, _)| r.clone())
        .collect();
    let m = minority.len();
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "SMOTE needs at least 2 minority samples in a training fold, got {m}"
        )));
    }
    let k_used = if m <= k {
        notes.push(format!(
            "SMOTE neighbours reduced from {k} to {} for a fold with {m} minority samples",
            m - 1
        ));
        m - 1
    } else {
        k
    };
    let synthetic = smote(&minority, target, k_used, seed)?;
    Ok(train.with_synthetic(synthetic, minority_label))
}

fn fit_predict(
    spec: &ModelSpec,
    hyper: &Hyper,
    train: &Dataset,
    queries: &[Vec<f64>],
    notes: &mut Vec<String>,
) -> Result<Vec<f64>> {
    let model = spec.fit(train, hyper)?;
    if !model.converged() {
        notes.push(format!(
            "{} with {hyper} stopped before converging",
            spec.name()
        ));
    }
    Ok(model.predict(queries))
}

/// Picks the grid setting with the best mean inner-fold AUC; the earliest
/// grid entry wins ties.
#[allow(clippy::too_many_arguments)]
fn select_hyper(
    spec: &ModelSpec,
    train: &Dataset,
    cfg: &StrategyConfig,
    run: &RunConfig,
    inner_folds: usize,
    seed: u64,
    outer_fold: usize,
    notes: &mut Vec<String>,
) -> Result<Hyper> {
    let grid = spec.grid();
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    let plan = stratified_kfold(
        train.labels(),
        inner_folds,
        derive_seed(seed, TAG_INNER_FOLDS, outer_fold as u64),
    )?;
    let mut splits = Vec::with_capacity(inner_folds);
    for g in 0..inner_folds {
        let (tr, te) = plan.split(g);
        let mut inner_train = train.subset(&tr);
        if cfg.use_smote {
            let s = derive_seed(seed, TAG_INNER_SMOTE, (outer_fold * inner_folds + g) as u64);
            inner_train = oversample(&inner_train, run.smote_k, s, notes)?;
        }
        splits.push((inner_train, train.subset(&te)));
    }
    let mut best: Option<(Hyper, f64)> = None;
    for hyper in grid {
        let mut total = 0.0;
        for (inner_train, inner_test) in &splits {
            let scores = fit_predict(spec, &hyper, inner_train, inner_test.features(), notes)?;
            total += auc(inner_test.labels(), &scores)?;
        }
        let mean = total / inner_folds as f64;
        if best.is_none_or(|(_, b)| mean > b) {
            best = Some((hyper, mean));
        }
    }
    best.map(|(h, _)| h)
        .ok_or_else(|| Error::Config("hyper-parameter grid is empty".into()))
}

/// Runs one training strategy under outer stratified cross-validation and
/// returns pooled out-of-fold scores sorted by sample id.
///
/// Oversampling only touches training portions. The decision threshold is
/// swept on the pooled predictions each fold's model makes for its own
/// original training samples, so test folds never influence it.
pub fn run_strategy(
    ds: &Dataset,
    spec: &ModelSpec,
    cfg: &StrategyConfig,
    run: &RunConfig,
    seed: u64,
) -> Result<StrategyRun> {
    spec.validate()?;
    ds.require_both_classes()?;
    let plan = stratified_kfold(ds.labels(), run.outer_folds, seed)?;

    let mut test_scores = vec![f64::NAN; ds.len()];
    let mut train_labels = Vec::new();
    let mut train_scores = Vec::new();
    let mut chosen = Vec::with_capacity(run.outer_folds);
    let mut notes = Vec::new();

    for fold in 0..run.outer_folds {
        let (tr, te) = plan.split(fold);
        let train = ds.subset(&tr);
        let hyper = match cfg.hyperparam_mode {
            HyperparamMode::Fixed => spec.fixed(),
            HyperparamMode::NestedGrid { inner_folds } => {
                select_hyper(spec, &train, cfg, run, inner_folds, seed, fold, &mut notes)?
            }
        };
        let fit_on = if cfg.use_smote {
            let s = derive_seed(seed, TAG_SMOTE, fold as u64);
            oversample(&train, run.smote_k, s, &mut notes)?
        } else {
            train.clone()
        };
        let model = spec.fit(&fit_on, &hyper)?;
        if !model.converged() {
            notes.push(format!(
                "{} with {hyper} stopped before converging in fold {fold}",
                spec.name()
            ));
        }
        let test_features: Vec<Vec<f64>> = te.iter().map(|&i| ds.features()[i].clone()).collect();
        for (&i, s) in te.iter().zip(model.predict(&test_features)) {
            test_scores[i] = s;
        }
        if cfg.threshold_moving {
            train_scores.extend(model.predict(train.features()));
            train_labels.extend_from_slice(train.labels());
        }
        chosen.push(hyper);
    }

    let threshold = if cfg.threshold_moving {
        let pooled = PredictionSet::from_scores(&train_labels, &train_scores, 0.5)?;
        threshold_sweep(&pooled, &run.threshold_grid, run.objective)?
    } else {
        0.5
    };

    let mut entries: Vec<Prediction> = (0..ds.len())
        .map(|i| Prediction {
            sample_id: ds.sample_ids()[i].clone(),
            label: ds.labels()[i],
            score: test_scores[i],
        })
        .collect();
    entries.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    let predictions = PredictionSet::new(spec.name(), cfg.id.to_string(), entries, threshold)?;
    Ok(StrategyRun {
        predictions,
        chosen,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Two well separated Gaussian-ish clusters in 3-D.
    fn clusters(n_pos: usize, n_neg: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (count, centre, label) in [(n_pos, 5.0, 1u8), (n_neg, -5.0, 0u8)] {
            for _ in 0..count {
                rows.push(
                    (0..3)
                        .map(|_| centre + rng.random_range(-1.0..1.0))
                        .collect(),
                );
                labels.push(label);
            }
        }
        Dataset::from_rows(rows, labels).unwrap()
    }

    fn small_run() -> RunConfig {
        RunConfig {
            outer_folds: 5,
            ..RunConfig::default()
        }
    }

    #[test]
    fn separable_clusters_score_perfect_auc() {
        let ds = clusters(30, 50, 1);
        for id in 1..=3 {
            let cfg = StrategyConfig::strategy(id).unwrap();
            for spec in [ModelSpec::knn(), ModelSpec::logreg()] {
                let run = run_strategy(&ds, &spec, &cfg, &small_run(), 42).unwrap();
                let p = &run.predictions;
                let labels: Vec<u8> = p.entries.iter().map(|e| e.label).collect();
                let scores: Vec<f64> = p.entries.iter().map(|e| e.score).collect();
                assert_eq!(
                    auc(&labels, &scores).unwrap(),
                    1.0,
                    "strategy {id} {}",
                    spec.name()
                );
            }
        }
    }

    #[test]
    fn smote_is_a_no_op_on_balanced_data() {
        let ds = clusters(25, 25, 2);
        let s1 = run_strategy(
            &ds,
            &ModelSpec::knn(),
            &StrategyConfig::strategy(1).unwrap(),
            &small_run(),
            7,
        )
        .unwrap();
        let s2 = run_strategy(
            &ds,
            &ModelSpec::knn(),
            &StrategyConfig::strategy(2).unwrap(),
            &small_run(),
            7,
        )
        .unwrap();
        assert_eq!(s1.predictions.entries, s2.predictions.entries);
        assert_eq!(s1.predictions.threshold, s2.predictions.threshold);
    }

    #[test]
    fn singleton_grid_matches_strategy_two() {
        let ds = clusters(20, 45, 3);
        let spec = ModelSpec::Knn {
            fixed: 6,
            grid: vec![6],
        };
        let s2 = run_strategy(
            &ds,
            &spec,
            &StrategyConfig::strategy(2).unwrap(),
            &small_run(),
            9,
        )
        .unwrap();
        let s3 = run_strategy(
            &ds,
            &spec,
            &StrategyConfig::strategy(3).unwrap(),
            &small_run(),
            9,
        )
        .unwrap();
        assert_eq!(s2.predictions.entries, s3.predictions.entries);
        assert_eq!(s2.predictions.threshold, s3.predictions.threshold);
    }

    #[test]
    fn output_sorted_and_deterministic() {
        let ds = clusters(15, 35, 4);
        let cfg = StrategyConfig::strategy(3).unwrap();
        let a = run_strategy(&ds, &ModelSpec::logreg(), &cfg, &small_run(), 1).unwrap();
        let b = run_strategy(&ds, &ModelSpec::logreg(), &cfg, &small_run(), 1).unwrap();
        assert_eq!(a, b);
        let ids: Vec<&String> = a.predictions.entries.iter().map(|e| &e.sample_id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(a.predictions.entries.len(), ds.len());
        assert_eq!(a.chosen.len(), 5);
    }

    #[test]
    fn smote_neighbour_count_is_clamped() {
        // 6 positives over 3 folds leaves 4 per training portion, below k = 5
        let ds = clusters(6, 30, 5);
        let run = RunConfig {
            outer_folds: 3,
            ..RunConfig::default()
        };
        let out = run_strategy(
            &ds,
            &ModelSpec::knn(),
            &StrategyConfig::strategy(2).unwrap(),
            &run,
            3,
        )
        .unwrap();
        assert!(out.notes.iter().any(|n| n.contains("reduced from 5 to 3")));
    }

    #[test]
    fn oversampling_balances_classes() {
        let ds = clusters(10, 24, 6);
        let mut notes = Vec::new();
        let out = oversample(&ds, 5, 0, &mut notes).unwrap();
        assert_eq!(out.class_counts(), (24, 24));
        assert_eq!(&out.features()[..ds.len()], ds.features());
    }

    #[test]
    fn unknown_strategy() {
        assert!(StrategyConfig::strategy(4).is_err());
    }
}
