use serde::Serialize;

use coughrank::ensemble::{EnsembleResult, RankingReport};
use coughrank::io::write_csv;
use coughrank::io::{
    write_closeness, write_decision_matrix, write_ensemble_report, write_ideals,
    write_topsis_report, write_weights,
};

use crate::error::CliResult;
use crate::manifest::RunManifest;
use crate::output::{file_stem, OutputDir};

pub const REPORT_FILE: &str = "report.json";
pub const SUMMARY_FILE: &str = "summary.txt";

#[derive(Debug, Clone, Serialize)]
pub struct WeightsSection {
    pub strategy: String,
    pub criteria: Vec<String>,
    pub weights: Vec<f64>,
    pub entropies: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopsisSection {
    pub strategy: String,
    pub models: Vec<String>,
    pub closeness: Vec<f64>,
    pub ranks: Vec<usize>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub ideal_best: Vec<f64>,
    pub ideal_worst: Vec<f64>,
    pub all_identical: bool,
    pub zero_columns: Vec<usize>,
}

/// The single JSON document summarising a ranking run.
#[derive(Debug, Clone, Serialize)]
pub struct JsonReport<'a> {
    pub weights: Vec<WeightsSection>,
    pub topsis: Vec<TopsisSection>,
    pub ensemble: &'a EnsembleResult,
    pub manifest: &'a RunManifest,
    pub notes: &'a [String],
}

impl<'a> JsonReport<'a> {
    pub fn new(report: &'a RankingReport, manifest: &'a RunManifest, notes: &'a [String]) -> Self {
        let weights = report
            .strategies
            .iter()
            .map(|s| WeightsSection {
                strategy: s.strategy.clone(),
                criteria: s.matrix.criteria().iter().map(|c| c.name.clone()).collect(),
                weights: s.weights.as_slice().to_vec(),
                entropies: s.weights.entropies().map(<[f64]>::to_vec),
            })
            .collect();
        let topsis = report
            .strategies
            .iter()
            .map(|s| TopsisSection {
                strategy: s.strategy.clone(),
                models: s.matrix.alternatives().to_vec(),
                closeness: s.topsis.closeness.clone(),
                ranks: s.topsis.ranks.clone(),
                s_plus: s.topsis.separations.iter().map(|p| p.0).collect(),
                s_minus: s.topsis.separations.iter().map(|p| p.1).collect(),
                ideal_best: s.topsis.ideal_best.clone(),
                ideal_worst: s.topsis.ideal_worst.clone(),
                all_identical: s.topsis.all_identical,
                zero_columns: s.topsis.zero_columns.clone(),
            })
            .collect();
        Self {
            weights,
            topsis,
            ensemble: &report.ensemble,
            manifest,
            notes,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Degeneracy flags raised while ranking.
pub fn ranking_flags(report: &RankingReport) -> Vec<String> {
    let mut flags = Vec::new();
    for s in &report.strategies {
        if s.topsis.all_identical {
            flags.push(format!(
                "strategy {}: all alternatives identical after weighting; closeness set to 0.5",
                s.strategy
            ));
        }
        for &j in &s.topsis.zero_columns {
            flags.push(format!(
                "strategy {}: criterion {} is zero for every model",
                s.strategy,
                s.matrix.criteria()[j].name
            ));
        }
    }
    flags
}

fn write_points(result: &EnsembleResult) -> String {
    let mut header = vec!["model"];
    header.extend(result.strategies.iter().map(String::as_str));
    header.push("total");
    write_csv(
        &header,
        result.models.iter().enumerate().map(|(i, m)| {
            let mut row = vec![m.clone()];
            row.extend(result.hard_points[i].iter().map(usize::to_string));
            row.push(result.hard_totals[i].to_string());
            row
        }),
    )
}

/// Writes per-strategy matrices, weights, ideals and TOPSIS tables plus the
/// closeness, ensemble and summary files.
pub fn write_ranking(out: &mut OutputDir, report: &RankingReport) -> CliResult<()> {
    for s in &report.strategies {
        let stem = file_stem(&s.strategy);
        let criteria = s.matrix.criteria();
        out.write(
            &format!("decision_matrix_{stem}.csv"),
            &write_decision_matrix(&s.matrix),
        )?;
        out.write(
            &format!("weights_{stem}.csv"),
            &write_weights(criteria, &s.weights),
        )?;
        out.write(
            &format!("ideals_{stem}.csv"),
            &write_ideals(criteria, &s.topsis),
        )?;
        out.write(
            &format!("topsis_report_{stem}.csv"),
            &write_topsis_report(s.matrix.alternatives(), &s.topsis),
        )?;
    }
    out.write("closeness.csv", &write_closeness(&report.closeness))?;
    out.write(
        "ensemble_report.csv",
        &write_ensemble_report(&report.ensemble),
    )?;
    out.write("hard_points.csv", &write_points(&report.ensemble))?;
    out.write(SUMMARY_FILE, &summary_text(report))?;
    Ok(())
}

/// Writes `report.json` and then the manifest, which lists it.
pub fn finish_with_report(
    mut out: OutputDir,
    report: &RankingReport,
    manifest: &mut RunManifest,
    notes: &[String],
) -> CliResult<Vec<String>> {
    let mut artifacts = out.artifacts();
    artifacts.push(REPORT_FILE.to_string());
    artifacts.sort();
    manifest.artifacts = artifacts;
    let json = JsonReport::new(report, manifest, notes).to_json()?;
    out.write(REPORT_FILE, &json)?;
    out.finish(manifest)
}

/// Fixed-width table of closeness per strategy with both ensemble outcomes.
pub fn summary_text(report: &RankingReport) -> String {
    let e = &report.ensemble;
    let width = e.models.iter().map(String::len).max().unwrap_or(5).max(5);
    let cw = e
        .strategies
        .iter()
        .map(|st| st.len() + 3)
        .max()
        .unwrap_or(0)
        .max(8);
    let mut s = String::new();
    s.push_str(&format!("{:<width$}", "model"));
    for st in &e.strategies {
        s.push_str(&format!("  {:>cw$}", format!("C[{st}]")));
    }
    s.push_str(&format!(
        "  {:>8}  {:>4}  {:>6}  {:>4}\n",
        "soft", "rank", "points", "rank"
    ));
    for (i, m) in e.models.iter().enumerate() {
        s.push_str(&format!("{m:<width$}"));
        for j in 0..e.strategies.len() {
            s.push_str(&format!("  {:>cw$.3}", report.closeness.get(i, j)));
        }
        s.push_str(&format!(
            "  {:>8.3}  {:>4}  {:>6}  {:>4}\n",
            e.soft_scores[i], e.soft_ranks[i], e.hard_totals[i], e.hard_ranks[i]
        ));
    }
    s.push('\n');
    s.push_str(&format!("soft_best: {}\n", e.soft_best));
    s.push_str(&format!("hard_best: {}\n", e.hard_best));
    for note in &e.tie_breaks {
        s.push_str(&format!("tie: {note}\n"));
    }
    s
}
