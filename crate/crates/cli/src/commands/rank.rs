use std::path::{Path, PathBuf};

use coughrank::ensemble::{rank_strategies, RankingReport};
use coughrank::io::{parse_decision_matrix, parse_weights};
use coughrank::metrics::DecisionMatrix;

use super::{load_criteria, read_tracked, start, Common, Outcome};
use crate::error::{staged, CliError, CliResult};
use crate::output::OutputDir;
use crate::report::{finish_with_report, ranking_flags, summary_text, write_ranking};

#[derive(Debug, Clone, Default)]
pub struct RankArgs {
    pub matrices: Vec<PathBuf>,
    pub criteria: Option<PathBuf>,
    /// Fixed weights used for every strategy instead of entropy weights.
    pub weights: Option<PathBuf>,
    pub tie_eps: Option<f64>,
    pub tie_decimals: Option<i32>,
    pub common: Common,
}

/// Strategy label of a matrix file: its stem without a leading
/// `decision_matrix_`.
pub fn strategy_label(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    stem.strip_prefix("decision_matrix_")
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .unwrap_or(stem)
}

pub fn cmd_rank(args: &RankArgs) -> CliResult<Outcome> {
    let (cfg, mut manifest) = start("rank", &args.common, |cfg| {
        if let Some(eps) = args.tie_eps {
            cfg.ties.eps = eps;
        }
        if let Some(d) = args.tie_decimals {
            cfg.ties.decimals = d;
        }
    })?;
    if args.matrices.is_empty() {
        return Err(CliError::input("no decision matrix files given"));
    }
    let criteria = load_criteria(&mut manifest, args.criteria.as_deref())?;
    let mut blocks: Vec<(String, DecisionMatrix)> = Vec::with_capacity(args.matrices.len());
    for path in &args.matrices {
        let text = read_tracked(&mut manifest, path)?;
        let dm = staged(
            "rank",
            parse_decision_matrix(&text, Some(&criteria), &path.display().to_string()),
        )?;
        let label = strategy_label(path);
        if blocks.iter().any(|(l, _)| *l == label) {
            return Err(CliError::input(format!(
                "two matrices share the strategy label {label:?}"
            )));
        }
        blocks.push((label, dm));
    }
    let weights = match &args.weights {
        Some(p) => {
            let text = read_tracked(&mut manifest, p)?;
            Some(staged(
                "rank",
                parse_weights(&text, &criteria, &p.display().to_string()),
            )?)
        }
        None => None,
    };
    let report = staged(
        "rank",
        rank_strategies(&blocks, weights.as_ref(), &cfg.tie_policy()),
    )?;
    let mut out = OutputDir::new(&args.common.out);
    write_ranking(&mut out, &report)?;
    let flags = ranking_flags(&report);
    let artifacts = finish_with_report(out, &report, &mut manifest, &flags)?;
    Ok(ranked_outcome(&report, artifacts, flags, Vec::new()))
}

pub(crate) fn ranked_outcome(
    report: &RankingReport,
    artifacts: Vec<String>,
    flags: Vec<String>,
    notes: Vec<String>,
) -> Outcome {
    Outcome {
        artifacts,
        summary: summary_text(report),
        flags,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_drop_matrix_prefix() {
        assert_eq!(strategy_label(Path::new("out/decision_matrix_2.csv")), "2");
        assert_eq!(
            strategy_label(Path::new("asymptomatic_s1.csv")),
            "asymptomatic_s1"
        );
        assert_eq!(
            strategy_label(Path::new("decision_matrix_.csv")),
            "decision_matrix_"
        );
    }
}
