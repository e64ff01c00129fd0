use std::path::{Path, PathBuf};

use rayon::prelude::*;

use coughrank::config::PipelineConfig;
use coughrank::ensemble::rank_strategies;
use coughrank::io::{
    apply_thresholds, parse_features, parse_labels, parse_predictions, parse_thresholds,
    write_predictions, write_thresholds,
};
use coughrank::learn::{run_strategy, Dataset};
use coughrank::metrics::PredictionSet;

use super::evaluate::{degeneracy_flags, evaluate_sets, write_evaluations};
use super::rank::ranked_outcome;
use super::rfecv::{select, write_selection};
use super::{load_criteria, read_tracked, sort_strategies, start, Common, Outcome};
use crate::error::{staged, CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::OutputDir;
use crate::report::{finish_with_report, ranking_flags, write_ranking};

pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const THRESHOLDS_FILE: &str = "thresholds.csv";

#[derive(Debug, Clone, Default)]
pub struct PipelineArgs {
    pub features: PathBuf,
    pub labels: Option<PathBuf>,
    /// Prediction files from models trained elsewhere.
    pub external: Vec<PathBuf>,
    /// Cutoffs for the external predictions; 0.5 where absent.
    pub external_thresholds: Option<PathBuf>,
    pub criteria: Option<PathBuf>,
    /// Run feature elimination before training.
    pub select_features: bool,
    pub common: Common,
}

/// Loads a feature table and its labels into a dataset.
pub(crate) fn load_dataset(
    manifest: &mut RunManifest,
    features: &Path,
    labels: Option<&Path>,
) -> CliResult<(Dataset, Vec<String>)> {
    let text = read_tracked(manifest, features)?;
    let mut table = staged(
        "features",
        parse_features(&text, &features.display().to_string()),
    )?;
    if let Some(p) = labels {
        let text = read_tracked(manifest, p)?;
        let labels = staged("labels", parse_labels(&text, &p.display().to_string()))?;
        staged("labels", table.attach_labels(&labels))?;
    }
    if !table.has_labels() {
        return Err(CliError::input(format!(
            "{} has no label column; pass a labels file",
            features.display()
        ))
        .at("features"));
    }
    let ds = staged("features", table.to_dataset())?;
    Ok((ds, table.columns))
}

/// Runs every configured strategy for every in-repo model. Runs are
/// independent and execute in parallel; results come back in
/// strategy-then-model order.
pub fn run_models(
    ds: &Dataset,
    cfg: &PipelineConfig,
) -> CliResult<(Vec<PredictionSet>, Vec<String>)> {
    let strategies = cfg.strategy_configs()?;
    let specs = cfg.model_specs()?;
    let run = cfg.run_config()?;
    let jobs: Vec<_> = strategies
        .iter()
        .flat_map(|s| specs.iter().map(move |m| (s, m)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(s, m)| {
            run_strategy(ds, m, s, &run, cfg.seed).map_err(|e| {
                CliError::from(e).at(&format!("train {} / strategy {}", m.name(), s.id))
            })
        })
        .collect();
    let mut sets = Vec::with_capacity(results.len());
    let mut notes = Vec::new();
    for ((s, m), r) in jobs.iter().zip(results) {
        let r = r?;
        notes.extend(
            r.notes
                .iter()
                .map(|n| format!("{} / strategy {}: {n}", m.name(), s.id)),
        );
        sets.push(r.predictions);
    }
    Ok((sets, notes))
}

/// Adds external prediction sets, rejecting model names already taken and
/// strategies that were not run.
pub fn merge_external(
    mut sets: Vec<PredictionSet>,
    external: Vec<PredictionSet>,
) -> CliResult<Vec<PredictionSet>> {
    let own_models: Vec<String> = sets.iter().map(|s| s.model.clone()).collect();
    let own_strategies: Vec<String> = sets.iter().map(|s| s.strategy.clone()).collect();
    for e in external {
        if own_models.contains(&e.model) {
            return Err(CliError::input(format!(
                "external model {:?} clashes with an in-repo model name",
                e.model
            )));
        }
        if !own_strategies.contains(&e.strategy) {
            return Err(CliError::input(format!(
                "external predictions for {:?} use strategy {:?}, which was not run",
                e.model, e.strategy
            )));
        }
        if sets
            .iter()
            .any(|s| s.model == e.model && s.strategy == e.strategy)
        {
            return Err(CliError::input(format!(
                "model {:?} strategy {:?} given twice",
                e.model, e.strategy
            )));
        }
        sets.push(e);
    }
    let mut order: Vec<String> = sets.iter().map(|s| s.strategy.clone()).collect();
    sort_strategies(&mut order);
    order.dedup();
    sets.sort_by(|a, b| {
        let pa = order.iter().position(|s| *s == a.strategy);
        let pb = order.iter().position(|s| *s == b.strategy);
        pa.cmp(&pb).then_with(|| a.model.cmp(&b.model))
    });
    Ok(sets)
}

pub fn cmd_pipeline(args: &PipelineArgs) -> CliResult<Outcome> {
    let (cfg, mut manifest) = start("pipeline", &args.common, |_| {})?;
    let criteria = load_criteria(&mut manifest, args.criteria.as_deref())?;
    let (mut ds, columns) = load_dataset(&mut manifest, &args.features, args.labels.as_deref())?;
    let mut out = OutputDir::new(&args.common.out);

    if args.select_features {
        let result = select(&ds, &cfg).map_err(|e| e.at("rfecv"))?;
        write_selection(&mut out, &result, &columns)?;
        ds = staged("rfecv", ds.select_features(&result.mask))?;
    }

    let mut external = Vec::new();
    for p in &args.external {
        let text = read_tracked(&mut manifest, p)?;
        external.extend(staged(
            "external",
            parse_predictions(&text, &p.display().to_string()),
        )?);
    }
    if let Some(p) = &args.external_thresholds {
        let text = read_tracked(&mut manifest, p)?;
        let t = staged(
            "external",
            parse_thresholds(&text, &p.display().to_string()),
        )?;
        staged("external", apply_thresholds(&mut external, &t))?;
    }

    let (own, mut notes) = run_models(&ds, &cfg)?;
    let n_models = cfg.learn.models.len();
    if n_models < 2 && external.is_empty() {
        return Err(CliError::input(format!(
            "ranking needs at least two models but only {n_models} in-repo model is configured; \
             add external predictions with --external"
        ))
        .at("pipeline"));
    }
    let sets = merge_external(own, external).map_err(|e| e.at("external"))?;
    out.write(PREDICTIONS_FILE, &write_predictions(&sets))?;
    out.write(THRESHOLDS_FILE, &write_thresholds(&sets))?;

    let evals = evaluate_sets(&sets, &criteria).map_err(|e| e.at("evaluate"))?;
    write_evaluations(&mut out, &evals)?;
    let blocks: Vec<_> = evals
        .iter()
        .map(|e| (e.strategy.clone(), e.matrix.clone()))
        .collect();
    let report = staged("rank", rank_strategies(&blocks, None, &cfg.tie_policy()))?;
    write_ranking(&mut out, &report)?;

    let mut flags = degeneracy_flags(&evals);
    flags.extend(ranking_flags(&report));
    notes.extend(flags.iter().cloned());
    let artifacts = finish_with_report(out, &report, &mut manifest, &notes)?;
    Ok(ranked_outcome(&report, artifacts, flags, notes))
}
