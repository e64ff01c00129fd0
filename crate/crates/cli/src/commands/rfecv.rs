use std::path::PathBuf;

use coughrank::config::PipelineConfig;
use coughrank::io::write_csv;
use coughrank::io::write_rfecv_curve;
use coughrank::learn::{rfecv, Dataset, RfecvResult};

use super::pipeline::load_dataset;
use super::{start, Common, Outcome};
use crate::error::CliResult;
use crate::output::OutputDir;

pub const CURVE_FILE: &str = "rfecv_curve.csv";
pub const SELECTED_FILE: &str = "selected_features.csv";

#[derive(Debug, Clone, Default)]
pub struct RfecvArgs {
    pub features: PathBuf,
    pub labels: Option<PathBuf>,
    pub common: Common,
}

pub(crate) fn select(ds: &Dataset, cfg: &PipelineConfig) -> CliResult<RfecvResult> {
    Ok(rfecv(
        ds,
        &cfg.rfecv_estimator(),
        cfg.rfecv.step,
        cfg.rfecv.folds,
        cfg.seed,
    )?)
}

pub(crate) fn write_selection(
    out: &mut OutputDir,
    result: &RfecvResult,
    columns: &[String],
) -> CliResult<()> {
    out.write(CURVE_FILE, &write_rfecv_curve(&result.curve))?;
    let kept = columns
        .iter()
        .zip(&result.mask)
        .filter(|(_, &k)| k)
        .map(|(c, _)| vec![c.clone()]);
    out.write(SELECTED_FILE, &write_csv(&["feature"], kept))
}

pub fn cmd_rfecv(args: &RfecvArgs) -> CliResult<Outcome> {
    let (cfg, mut manifest) = start("rfecv", &args.common, |_| {})?;
    let (ds, columns) = load_dataset(&mut manifest, &args.features, args.labels.as_deref())?;
    let result = select(&ds, &cfg).map_err(|e| e.at("rfecv"))?;
    let mut out = OutputDir::new(&args.common.out);
    write_selection(&mut out, &result, &columns)?;
    let artifacts = out.finish(&mut manifest)?;
    let best = result
        .curve
        .iter()
        .find(|(n, _)| *n == result.n_selected())
        .map(|p| p.1)
        .unwrap_or_default();
    Ok(Outcome {
        artifacts,
        summary: format!(
            "kept {} of {} features (mean AUC {best:.4})\n",
            result.n_selected(),
            columns.len()
        ),
        ..Outcome::default()
    })
}
