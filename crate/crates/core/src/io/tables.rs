use std::collections::{HashMap, HashSet};

use super::{expect_header, format_float, parse_number, read_csv, write_csv};
use crate::ensemble::{ClosenessTable, EnsembleResult};
use crate::error::{Error, Result};
use crate::learn::Dataset;
use crate::mcdm::{TopsisResult, WeightVector};
use crate::metrics::{CriterionSpec, DecisionMatrix, Direction, Metric, Prediction, PredictionSet};

pub const PREDICTIONS_HEADER: [&str; 5] = ["model", "strategy", "sample_id", "true_label", "score"];
pub const THRESHOLDS_HEADER: [&str; 3] = ["model", "strategy", "threshold"];
pub const CRITERIA_HEADER: [&str; 2] = ["name", "direction"];
pub const WEIGHTS_HEADER: [&str; 2] = ["criterion", "weight"];
pub const IDEALS_HEADER: [&str; 3] = ["criterion", "ideal_best", "ideal_worst"];
pub const TOPSIS_HEADER: [&str; 5] = ["model", "closeness", "rank", "s_plus", "s_minus"];
pub const CLOSENESS_HEADER: [&str; 3] = ["model", "strategy", "closeness"];
pub const ENSEMBLE_HEADER: [&str; 5] = [
    "model",
    "soft_score",
    "soft_rank",
    "hard_total",
    "hard_rank",
];
pub const RFECV_HEADER: [&str; 2] = ["n_features", "mean_auc"];
pub const LABELS_HEADER: [&str; 2] = ["sample_id", "label"];

/// Accepts `1`/`0` as well as `covid`/`non_covid`.
pub fn parse_label(cell: &str) -> Option<u8> {
    match cell.to_ascii_lowercase().as_str() {
        "1" | "covid" => Some(1),
        "0" | "non_covid" => Some(0),
        _ => None,
    }
}

fn label_cell(cell: &str, origin: &str, line: u64) -> Result<u8> {
    parse_label(cell).ok_or_else(|| {
        Error::parse(
            origin,
            line,
            format!("label must be 1, 0, covid or non_covid, found {cell:?}"),
        )
    })
}

fn non_empty<'a>(cell: &'a str, column: &str, origin: &str, line: u64) -> Result<&'a str> {
    if cell.is_empty() {
        return Err(Error::parse(
            origin,
            line,
            format!("column {column} is empty"),
        ));
    }
    Ok(cell)
}

// ---------------------------------------------------------------- features

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub sample_id: String,
    pub label: Option<u8>,
    pub values: Vec<f64>,
}

/// Contents of a `features.csv`: `sample_id`, an optional `label`, then one
/// numeric column per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub columns: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn has_labels(&self) -> bool {
        self.rows.iter().all(|r| r.label.is_some()) && !self.rows.is_empty()
    }

    /// Fills in labels from `(sample_id, label)` pairs; unknown ids are an
    /// error and rows without a label afterwards are an error too.
    pub fn attach_labels(&mut self, labels: &[(String, u8)]) -> Result<()> {
        let map: HashMap<&str, u8> = labels.iter().map(|(s, l)| (s.as_str(), *l)).collect();
        for row in &mut self.rows {
            if let Some(&l) = map.get(row.sample_id.as_str()) {
                row.label = Some(l);
            }
        }
        if let Some(r) = self.rows.iter().find(|r| r.label.is_none()) {
            return Err(Error::InvalidInput(format!(
                "sample {:?} has no label",
                r.sample_id
            )));
        }
        Ok(())
    }

    pub fn to_dataset(&self) -> Result<Dataset> {
        let labels = self
            .rows
            .iter()
            .map(|r| {
                r.label.ok_or_else(|| {
                    Error::InvalidInput(format!("sample {:?} has no label", r.sample_id))
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        Dataset::new(
            self.rows.iter().map(|r| r.values.clone()).collect(),
            labels,
            self.rows.iter().map(|r| r.sample_id.clone()).collect(),
        )
    }
}

pub fn parse_features(text: &str, origin: &str) -> Result<FeatureTable> {
    let table = read_csv(text, origin)?;
    if table.header.first().map(String::as_str) != Some("sample_id") {
        return Err(Error::parse(origin, 1, "first column must be sample_id"));
    }
    let has_label = table.header.get(1).map(String::as_str) == Some("label");
    let first_feature = if has_label { 2 } else { 1 };
    let columns: Vec<String> = table.header[first_feature..].to_vec();
    if columns.is_empty() {
        return Err(Error::parse(origin, 1, "no feature columns"));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = columns.iter().find(|c| !seen.insert(c.as_str())) {
        return Err(Error::parse(origin, 1, format!("duplicate column {dup:?}")));
    }
    let mut ids = HashSet::new();
    let mut rows = Vec::with_capacity(table.rows.len());
    for (line, cells) in &table.rows {
        let id = non_empty(&cells[0], "sample_id", origin, *line)?;
        if !ids.insert(id.to_string()) {
            return Err(Error::parse(
                origin,
                *line,
                format!("duplicate sample_id {id:?}"),
            ));
        }
        let label = if has_label {
            Some(label_cell(&cells[1], origin, *line)?)
        } else {
            None
        };
        let values = cells[first_feature..]
            .iter()
            .zip(&columns)
            .map(|(c, name)| parse_number(c, name, origin, *line))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(FeatureRow {
            sample_id: id.to_string(),
            label,
            values,
        });
    }
    Ok(FeatureTable { columns, rows })
}

pub fn write_features(table: &FeatureTable) -> String {
    let with_label = table.has_labels();
    let mut header: Vec<&str> = vec!["sample_id"];
    if with_label {
        header.push("label");
    }
    header.extend(table.columns.iter().map(String::as_str));
    write_csv(
        &header,
        table.rows.iter().map(|r| {
            let mut out = vec![r.sample_id.clone()];
            if with_label {
                out.push(r.label.unwrap_or_default().to_string());
            }
            out.extend(r.values.iter().map(|&v| format_float(v)));
            out
        }),
    )
}

pub fn parse_labels(text: &str, origin: &str) -> Result<Vec<(String, u8)>> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &LABELS_HEADER, origin)?;
    let mut seen = HashSet::new();
    table
        .rows
        .iter()
        .map(|(line, cells)| {
            let id = non_empty(&cells[0], "sample_id", origin, *line)?;
            if !seen.insert(id.to_string()) {
                return Err(Error::parse(
                    origin,
                    *line,
                    format!("duplicate sample_id {id:?}"),
                ));
            }
            Ok((id.to_string(), label_cell(&cells[1], origin, *line)?))
        })
        .collect()
}

pub fn write_labels(labels: &[(String, u8)]) -> String {
    write_csv(
        &LABELS_HEADER,
        labels.iter().map(|(id, l)| vec![id.clone(), l.to_string()]),
    )
}

// ------------------------------------------------------------- predictions

/// Groups rows by `(model, strategy)` in first-seen order. Every group gets
/// threshold 0.5 until [`apply_thresholds`] overrides it.
pub fn parse_predictions(text: &str, origin: &str) -> Result<Vec<PredictionSet>> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &PREDICTIONS_HEADER, origin)?;
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: HashMap<(String, String), (Vec<Prediction>, HashSet<String>)> = HashMap::new();
    for (line, cells) in &table.rows {
        let model = non_empty(&cells[0], "model", origin, *line)?.to_string();
        let strategy = non_empty(&cells[1], "strategy", origin, *line)?.to_string();
        let sample_id = non_empty(&cells[2], "sample_id", origin, *line)?.to_string();
        let label = label_cell(&cells[3], origin, *line)?;
        let score = parse_number(&cells[4], "score", origin, *line)?;
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::parse(
                origin,
                *line,
                format!("score must lie in [0, 1], found {score}"),
            ));
        }
        let key = (model, strategy);
        let entry = groups.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            (Vec::new(), HashSet::new())
        });
        if !entry.1.insert(sample_id.clone()) {
            return Err(Error::parse(
                origin,
                *line,
                format!(
                    "duplicate sample_id {sample_id:?} for model {:?} strategy {:?}",
                    key.0, key.1
                ),
            ));
        }
        entry.0.push(Prediction {
            sample_id,
            label,
            score,
        });
    }
    if order.is_empty() {
        return Err(Error::parse(origin, 2, "no prediction rows"));
    }
    order
        .into_iter()
        .map(|key| {
            let (entries, _) = groups.remove(&key).unwrap_or_default();
            PredictionSet::new(key.0, key.1, entries, 0.5)
        })
        .collect()
}

pub fn write_predictions(sets: &[PredictionSet]) -> String {
    write_csv(
        &PREDICTIONS_HEADER,
        sets.iter().flat_map(|s| {
            s.entries.iter().map(move |e| {
                vec![
                    s.model.clone(),
                    s.strategy.clone(),
                    e.sample_id.clone(),
                    e.label.to_string(),
                    format_float(e.score),
                ]
            })
        }),
    )
}

pub fn parse_thresholds(text: &str, origin: &str) -> Result<Vec<(String, String, f64)>> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &THRESHOLDS_HEADER, origin)?;
    let mut seen = HashSet::new();
    table
        .rows
        .iter()
        .map(|(line, cells)| {
            let model = non_empty(&cells[0], "model", origin, *line)?.to_string();
            let strategy = non_empty(&cells[1], "strategy", origin, *line)?.to_string();
            let t = parse_number(&cells[2], "threshold", origin, *line)?;
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::parse(
                    origin,
                    *line,
                    format!("threshold {t} outside (0, 1)"),
                ));
            }
            if !seen.insert((model.clone(), strategy.clone())) {
                return Err(Error::parse(origin, *line, "duplicate model/strategy pair"));
            }
            Ok((model, strategy, t))
        })
        .collect()
}

pub fn write_thresholds(sets: &[PredictionSet]) -> String {
    write_csv(
        &THRESHOLDS_HEADER,
        sets.iter().map(|s| {
            vec![
                s.model.clone(),
                s.strategy.clone(),
                format_float(s.threshold),
            ]
        }),
    )
}

/// Sets each group's threshold from `(model, strategy, threshold)` triples.
pub fn apply_thresholds(
    sets: &mut [PredictionSet],
    thresholds: &[(String, String, f64)],
) -> Result<()> {
    for (model, strategy, t) in thresholds {
        let set = sets
            .iter_mut()
            .find(|s| &s.model == model && &s.strategy == strategy)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "threshold given for model {model:?} strategy {strategy:?} with no predictions"
                ))
            })?;
        set.threshold = *t;
    }
    Ok(())
}

// ---------------------------------------------------------- decision matrix

pub fn parse_criteria(text: &str, origin: &str) -> Result<Vec<CriterionSpec>> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &CRITERIA_HEADER, origin)?;
    let mut seen = HashSet::new();
    let criteria = table
        .rows
        .iter()
        .map(|(line, cells)| {
            let name = non_empty(&cells[0], "name", origin, *line)?;
            if !seen.insert(name.to_string()) {
                return Err(Error::parse(
                    origin,
                    *line,
                    format!("duplicate criterion {name:?}"),
                ));
            }
            let direction = cells[1]
                .parse::<Direction>()
                .map_err(|e| Error::parse(origin, *line, e.to_string()))?;
            Ok(CriterionSpec::new(name, direction))
        })
        .collect::<Result<Vec<_>>>()?;
    if criteria.is_empty() {
        return Err(Error::parse(origin, 2, "no criteria"));
    }
    Ok(criteria)
}

pub fn write_criteria(criteria: &[CriterionSpec]) -> String {
    write_csv(
        &CRITERIA_HEADER,
        criteria
            .iter()
            .map(|c| vec![c.name.clone(), c.direction.as_str().to_string()]),
    )
}

/// Parses `model,<criterion>...`. With `criteria` given, the matrix columns
/// must be exactly those criteria (in any order) and are reordered to match.
/// Without it every column must name one of the eight standard metrics and
/// takes that metric's direction.
pub fn parse_decision_matrix(
    text: &str,
    criteria: Option<&[CriterionSpec]>,
    origin: &str,
) -> Result<DecisionMatrix> {
    let table = read_csv(text, origin)?;
    if table.header.first().map(String::as_str) != Some("model") {
        return Err(Error::parse(origin, 1, "first column must be model"));
    }
    let columns = &table.header[1..];
    let specs: Vec<CriterionSpec> = match criteria {
        Some(c) => c.to_vec(),
        None => columns
            .iter()
            .map(|name| {
                name.parse::<Metric>()
                    .map(|m| CriterionSpec::new(name.clone(), m.direction()))
                    .map_err(|_| {
                        Error::parse(
                            origin,
                            1,
                            format!("unknown criterion {name:?}; supply a criteria file"),
                        )
                    })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let mut index = Vec::with_capacity(specs.len());
    for spec in &specs {
        let pos = columns
            .iter()
            .position(|c| c == &spec.name)
            .ok_or_else(|| {
                Error::parse(
                    origin,
                    1,
                    format!("criterion {:?} missing from matrix", spec.name),
                )
            })?;
        index.push(pos);
    }
    if columns.len() != specs.len() {
        return Err(Error::parse(
            origin,
            1,
            format!(
                "matrix has {} criteria columns, expected {}",
                columns.len(),
                specs.len()
            ),
        ));
    }
    let mut names = Vec::with_capacity(table.rows.len());
    let mut rows = Vec::with_capacity(table.rows.len());
    for (line, cells) in &table.rows {
        names.push(non_empty(&cells[0], "model", origin, *line)?.to_string());
        let row = index
            .iter()
            .map(|&pos| parse_number(&cells[pos + 1], &columns[pos], origin, *line))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    DecisionMatrix::from_rows(names, specs, &rows)
        .map_err(|e| Error::parse(origin, 0, e.to_string()))
}

pub fn write_decision_matrix(dm: &DecisionMatrix) -> String {
    let mut header = vec!["model"];
    header.extend(dm.criteria().iter().map(|c| c.name.as_str()));
    write_csv(
        &header,
        (0..dm.n_alternatives()).map(|i| {
            let mut row = vec![dm.alternatives()[i].clone()];
            row.extend(dm.row(i).iter().map(|&v| format_float(v)));
            row
        }),
    )
}

// ------------------------------------------------------------ MCDM reports

pub fn write_weights(criteria: &[CriterionSpec], weights: &WeightVector) -> String {
    write_csv(
        &WEIGHTS_HEADER,
        criteria
            .iter()
            .zip(weights.as_slice())
            .map(|(c, &w)| vec![c.name.clone(), format_float(w)]),
    )
}

/// Reads `criterion,weight` rows into a weight vector aligned with
/// `criteria`. Weights are rescaled to sum to one.
pub fn parse_weights(text: &str, criteria: &[CriterionSpec], origin: &str) -> Result<WeightVector> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &WEIGHTS_HEADER, origin)?;
    let mut map = HashMap::new();
    for (line, cells) in &table.rows {
        let w = parse_number(&cells[1], "weight", origin, *line)?;
        if map.insert(cells[0].clone(), w).is_some() {
            return Err(Error::parse(
                origin,
                *line,
                format!("duplicate criterion {:?}", cells[0]),
            ));
        }
    }
    if map.len() != criteria.len() {
        return Err(Error::parse(
            origin,
            1,
            format!("{} weights for {} criteria", map.len(), criteria.len()),
        ));
    }
    let raw = criteria
        .iter()
        .map(|c| {
            map.get(&c.name).copied().ok_or_else(|| {
                Error::parse(origin, 1, format!("no weight for criterion {:?}", c.name))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    WeightVector::normalized(raw).map_err(|e| Error::parse(origin, 0, e.to_string()))
}

pub fn write_ideals(criteria: &[CriterionSpec], result: &TopsisResult) -> String {
    write_csv(
        &IDEALS_HEADER,
        criteria.iter().enumerate().map(|(j, c)| {
            vec![
                c.name.clone(),
                format_float(result.ideal_best[j]),
                format_float(result.ideal_worst[j]),
            ]
        }),
    )
}

pub fn write_topsis_report(models: &[String], result: &TopsisResult) -> String {
    write_csv(
        &TOPSIS_HEADER,
        models.iter().enumerate().map(|(i, m)| {
            vec![
                m.clone(),
                format_float(result.closeness[i]),
                result.ranks[i].to_string(),
                format_float(result.separations[i].0),
                format_float(result.separations[i].1),
            ]
        }),
    )
}

pub fn parse_closeness(text: &str, origin: &str) -> Result<ClosenessTable> {
    let table = read_csv(text, origin)?;
    expect_header(&table, &CLOSENESS_HEADER, origin)?;
    let cells = table
        .rows
        .iter()
        .map(|(line, cells)| {
            let model = non_empty(&cells[0], "model", origin, *line)?.to_string();
            let strategy = non_empty(&cells[1], "strategy", origin, *line)?.to_string();
            let c = parse_number(&cells[2], "closeness", origin, *line)?;
            Ok((model, strategy, c))
        })
        .collect::<Result<Vec<_>>>()?;
    ClosenessTable::from_cells(&cells).map_err(|e| Error::parse(origin, 0, e.to_string()))
}

pub fn write_closeness(ct: &ClosenessTable) -> String {
    write_csv(
        &CLOSENESS_HEADER,
        (0..ct.n_models()).flat_map(|i| {
            (0..ct.n_strategies()).map(move |j| {
                vec![
                    ct.models()[i].clone(),
                    ct.strategies()[j].clone(),
                    format_float(ct.get(i, j)),
                ]
            })
        }),
    )
}

pub fn write_ensemble_report(result: &EnsembleResult) -> String {
    write_csv(
        &ENSEMBLE_HEADER,
        result.models.iter().enumerate().map(|(i, m)| {
            vec![
                m.clone(),
                format_float(result.soft_scores[i]),
                result.soft_ranks[i].to_string(),
                result.hard_totals[i].to_string(),
                result.hard_ranks[i].to_string(),
            ]
        }),
    )
}

pub fn write_rfecv_curve(curve: &[(usize, f64)]) -> String {
    write_csv(
        &RFECV_HEADER,
        curve
            .iter()
            .map(|&(n, auc)| vec![n.to_string(), format_float(auc)]),
    )
}
