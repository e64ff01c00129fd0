use std::path::{Path, PathBuf};

use rayon::prelude::*;

use coughrank::audio::{decode_wav, extract_features_with, resample, AudioClip, FeatureVector};
use coughrank::config::PipelineConfig;
use coughrank::io::{parse_labels, write_features, FeatureRow, FeatureTable};

use super::{read_bytes, read_tracked, start, Common, Outcome};
use crate::error::{staged, CliError, CliResult};
use crate::output::OutputDir;

pub const FEATURES_FILE: &str = "features.csv";
pub const LABELS_FILE: &str = "labels.csv";

#[derive(Debug, Clone, Default)]
pub struct ExtractArgs {
    pub input_dir: PathBuf,
    /// Defaults to `labels.csv` inside the input directory when present.
    pub labels: Option<PathBuf>,
    pub common: Common,
}

/// WAV files directly inside `dir`, sorted by file name.
pub fn list_wavs(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::input(format!("cannot list {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|x| x.to_str())
                    .is_some_and(|x| x.eq_ignore_ascii_case("wav"))
        })
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn features_of(bytes: &[u8], cfg: &PipelineConfig) -> coughrank::error::Result<Vec<f64>> {
    let clip = decode_wav(bytes)?;
    let rate = cfg.audio.sample_rate;
    let clip = if clip.sample_rate() == rate {
        clip
    } else {
        AudioClip::new(resample(clip.samples(), clip.sample_rate(), rate), rate)?
    };
    Ok(extract_features_with(&clip, &cfg.feature_config())?.to_vec())
}

/// Decodes and featurizes every file in parallel. Failed files are
/// reported in the second return value and left out of the table.
pub fn extract_files(
    files: &[(String, Vec<u8>)],
    cfg: &PipelineConfig,
) -> (FeatureTable, Vec<String>) {
    let results: Vec<_> = files
        .par_iter()
        .map(|(id, bytes)| (id, features_of(bytes, cfg)))
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (id, r) in results {
        match r {
            Ok(values) => rows.push(FeatureRow {
                sample_id: id.clone(),
                label: None,
                values,
            }),
            Err(e) => skipped.push(format!("skipped {id}: {e}")),
        }
    }
    (
        FeatureTable {
            columns: FeatureVector::column_names(),
            rows,
        },
        skipped,
    )
}

pub fn cmd_extract(args: &ExtractArgs) -> CliResult<Outcome> {
    let (cfg, mut manifest) = start("extract", &args.common, |_| {})?;
    let paths = list_wavs(&args.input_dir)?;
    if paths.is_empty() {
        return Err(CliError::input(format!(
            "no .wav files found in {}",
            args.input_dir.display()
        ))
        .at("extract"));
    }
    let mut files = Vec::with_capacity(paths.len());
    for p in &paths {
        let bytes = read_bytes(p)?;
        manifest.add_input(p, &bytes);
        let id = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        files.push((id, bytes));
    }
    let (mut table, skipped) = extract_files(&files, &cfg);
    for line in &skipped {
        eprintln!("warning: {line}");
    }
    if table.rows.is_empty() {
        return Err(CliError::input(format!(
            "none of the {} files in {} could be decoded",
            paths.len(),
            args.input_dir.display()
        ))
        .at("extract"));
    }

    let labels_path = args.labels.clone().or_else(|| {
        let p = args.input_dir.join(LABELS_FILE);
        p.is_file().then_some(p)
    });
    if let Some(p) = labels_path {
        let text = read_tracked(&mut manifest, &p)?;
        let labels = staged("labels", parse_labels(&text, &p.display().to_string()))?;
        staged("labels", table.attach_labels(&labels))?;
    }

    let mut out = OutputDir::new(&args.common.out);
    out.write(FEATURES_FILE, &write_features(&table))?;
    let artifacts = out.finish(&mut manifest)?;
    Ok(Outcome {
        artifacts,
        summary: format!(
            "extracted {} of {} files ({} features each)\n",
            table.rows.len(),
            paths.len(),
            table.columns.len()
        ),
        flags: Vec::new(),
        notes: skipped,
    })
}
