use std::path::PathBuf;

use coughrank::io::format_float;
use coughrank::io::write_csv;
use coughrank::io::{
    apply_thresholds, parse_decision_matrix, parse_predictions, parse_thresholds,
    write_decision_matrix,
};
use coughrank::metrics::{
    build_decision_matrix, evaluate, CriterionSpec, DecisionMatrix, EvaluationReport, Metric,
    PredictionSet,
};

use super::{load_criteria, read_tracked, sort_strategies, start, Common, Outcome};
use crate::error::{staged, CliError, CliResult};
use crate::output::{file_stem, OutputDir};

#[derive(Debug, Clone, Default)]
pub struct EvaluateArgs {
    pub predictions: Option<PathBuf>,
    pub thresholds: Option<PathBuf>,
    /// Decision matrices to validate and pass through instead of predictions.
    pub matrices: Vec<PathBuf>,
    pub criteria: Option<PathBuf>,
    pub common: Common,
}

/// Metrics of every model evaluated under one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyEvaluation {
    pub strategy: String,
    pub models: Vec<String>,
    pub thresholds: Vec<f64>,
    pub reports: Vec<EvaluationReport>,
    pub matrix: DecisionMatrix,
}

/// Groups prediction sets by strategy, evaluates each model and assembles one
/// decision matrix per strategy. Strategies come out in numeric-then-name
/// order and models in name order.
pub fn evaluate_sets(
    sets: &[PredictionSet],
    criteria: &[CriterionSpec],
) -> CliResult<Vec<StrategyEvaluation>> {
    let mut strategies: Vec<String> = Vec::new();
    for s in sets {
        if !strategies.contains(&s.strategy) {
            strategies.push(s.strategy.clone());
        }
    }
    sort_strategies(&mut strategies);
    let mut out = Vec::with_capacity(strategies.len());
    for strategy in strategies {
        let mut group: Vec<&PredictionSet> =
            sets.iter().filter(|s| s.strategy == strategy).collect();
        group.sort_by(|a, b| a.model.cmp(&b.model));
        if let Some(w) = group.windows(2).find(|w| w[0].model == w[1].model) {
            return Err(CliError::input(format!(
                "model {:?} appears twice under strategy {strategy:?}",
                w[0].model
            )));
        }
        if group.len() < 2 {
            return Err(CliError::input(format!(
                "strategy {strategy:?} has {} model(s); ranking needs at least 2",
                group.len()
            )));
        }
        let mut named = Vec::with_capacity(group.len());
        for set in &group {
            let report = evaluate(set).map_err(|e| {
                CliError::from(e).at(&format!("evaluate {} / {}", set.model, strategy))
            })?;
            named.push((set.model.clone(), report));
        }
        let matrix = build_decision_matrix(&named, criteria)?;
        out.push(StrategyEvaluation {
            strategy,
            models: named.iter().map(|(m, _)| m.clone()).collect(),
            thresholds: group.iter().map(|s| s.threshold).collect(),
            reports: named.into_iter().map(|(_, r)| r).collect(),
            matrix,
        });
    }
    Ok(out)
}

/// One line per metric that fell back to zero because its ratio was 0/0.
pub fn degeneracy_flags(evals: &[StrategyEvaluation]) -> Vec<String> {
    let mut flags = Vec::new();
    for ev in evals {
        for (model, report) in ev.models.iter().zip(&ev.reports) {
            for m in &report.degenerate {
                flags.push(format!(
                    "model {model} strategy {}: {} undefined (0/0), reported as 0",
                    ev.strategy,
                    m.name()
                ));
            }
        }
    }
    flags
}

pub fn write_evaluation(ev: &StrategyEvaluation) -> String {
    let mut header = vec!["model", "threshold", "tp", "fp", "tn", "fn"];
    header.extend(Metric::ALL.iter().map(|m| m.name()));
    header.push("degenerate");
    write_csv(
        &header,
        ev.models
            .iter()
            .zip(&ev.reports)
            .zip(&ev.thresholds)
            .map(|((m, r), &t)| {
                let c = &r.counts;
                let mut row = vec![
                    m.clone(),
                    format_float(t),
                    c.tp.to_string(),
                    c.fp.to_string(),
                    c.tn.to_string(),
                    c.fn_.to_string(),
                ];
                row.extend(Metric::ALL.iter().map(|&k| format_float(r.get(k))));
                row.push(
                    r.degenerate
                        .iter()
                        .map(|k| k.name())
                        .collect::<Vec<_>>()
                        .join(";"),
                );
                row
            }),
    )
}

pub fn write_evaluations(out: &mut OutputDir, evals: &[StrategyEvaluation]) -> CliResult<()> {
    for ev in evals {
        let stem = file_stem(&ev.strategy);
        out.write(&format!("evaluation_{stem}.csv"), &write_evaluation(ev))?;
        out.write(
            &format!("decision_matrix_{stem}.csv"),
            &write_decision_matrix(&ev.matrix),
        )?;
    }
    Ok(())
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult<Outcome> {
    let (_cfg, mut manifest) = start("evaluate", &args.common, |_| {})?;
    let criteria = load_criteria(&mut manifest, args.criteria.as_deref())?;
    let mut out = OutputDir::new(&args.common.out);

    if !args.matrices.is_empty() {
        if args.predictions.is_some() {
            return Err(CliError::input(
                "give either predictions or --matrix files, not both",
            ));
        }
        let mut names = Vec::new();
        for path in &args.matrices {
            let text = read_tracked(&mut manifest, path)?;
            let dm = staged(
                "evaluate",
                parse_decision_matrix(&text, Some(&criteria), &path.display().to_string()),
            )?;
            let stem = super::rank::strategy_label(path);
            if names.contains(&stem) {
                return Err(CliError::input(format!("two matrices named {stem:?}")));
            }
            out.write(
                &format!("decision_matrix_{}.csv", file_stem(&stem)),
                &write_decision_matrix(&dm),
            )?;
            names.push(stem);
        }
        let artifacts = out.finish(&mut manifest)?;
        return Ok(Outcome {
            artifacts,
            summary: format!("validated {} decision matrices\n", names.len()),
            ..Outcome::default()
        });
    }

    let path = args
        .predictions
        .as_ref()
        .ok_or_else(|| CliError::input("no predictions file given"))?;
    let text = read_tracked(&mut manifest, path)?;
    let mut sets = staged(
        "evaluate",
        parse_predictions(&text, &path.display().to_string()),
    )?;
    if let Some(tp) = &args.thresholds {
        let text = read_tracked(&mut manifest, tp)?;
        let thresholds = staged(
            "evaluate",
            parse_thresholds(&text, &tp.display().to_string()),
        )?;
        staged("evaluate", apply_thresholds(&mut sets, &thresholds))?;
    }
    let evals = evaluate_sets(&sets, &criteria).map_err(|e| e.at("evaluate"))?;
    write_evaluations(&mut out, &evals)?;
    let flags = degeneracy_flags(&evals);
    let artifacts = out.finish(&mut manifest)?;
    let summary = evals
        .iter()
        .map(|ev| format!("strategy {}: {} models\n", ev.strategy, ev.models.len()))
        .collect();
    Ok(Outcome {
        artifacts,
        summary,
        flags,
        notes: Vec::new(),
    })
}
