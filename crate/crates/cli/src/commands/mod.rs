use std::path::{Path, PathBuf};

use coughrank::config::PipelineConfig;
use coughrank::io::parse_criteria;
use coughrank::metrics::CriterionSpec;

use crate::error::{CliError, CliResult, ExitStatus};
use crate::manifest::RunManifest;

pub mod evaluate;
pub mod extract;
pub mod pipeline;
pub mod rank;
pub mod rfecv;

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

/// Result of a subcommand that ran to completion.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: Vec<String>,
    pub summary: String,
    /// Numerical degeneracies found along the way. Outputs are still written.
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn status(&self) -> ExitStatus {
        if self.flags.is_empty() {
            ExitStatus::Success
        } else {
            ExitStatus::Degenerate
        }
    }
}

pub(crate) fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

/// Reads a UTF-8 input and records its digest in the manifest.
pub(crate) fn read_tracked(manifest: &mut RunManifest, path: &Path) -> CliResult<String> {
    let bytes = read_bytes(path)?;
    manifest.add_input(path, &bytes);
    String::from_utf8(bytes)
        .map_err(|_| CliError::input(format!("{} is not valid UTF-8", path.display())))
}

/// Loads the config file (if any), applies the seed override and starts a
/// manifest that records the config digest.
pub(crate) fn start(
    command: &str,
    common: &Common,
    tweak: impl FnOnce(&mut PipelineConfig),
) -> CliResult<(PipelineConfig, RunManifest)> {
    let (mut cfg, raw) = match &common.config {
        Some(path) => {
            let bytes = read_bytes(path)?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::input(format!("{} is not valid UTF-8", path.display())))?;
            let cfg =
                PipelineConfig::from_toml(&text).map_err(|e| CliError::from(e).at("config"))?;
            (cfg, Some((path.clone(), bytes)))
        }
        None => (PipelineConfig::default(), None),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    tweak(&mut cfg);
    cfg.validate().map_err(|e| CliError::from(e).at("config"))?;
    let mut manifest = RunManifest::new(command, &cfg);
    if let Some((path, bytes)) = raw {
        manifest.add_input(&path, &bytes);
    }
    Ok((cfg, manifest))
}

pub(crate) fn load_criteria(
    manifest: &mut RunManifest,
    path: Option<&Path>,
) -> CliResult<Vec<CriterionSpec>> {
    match path {
        Some(p) => {
            let text = read_tracked(manifest, p)?;
            parse_criteria(&text, &p.display().to_string())
                .map_err(|e| CliError::from(e).at("criteria"))
        }
        None => Ok(CriterionSpec::defaults()),
    }
}

/// Sorts strategy labels: numeric labels first in numeric order, then the
/// rest lexicographically.
pub fn sort_strategies(labels: &mut [String]) {
    labels.sort_by(|a, b| {
        let key = |s: &str| s.parse::<u64>().ok();
        match (key(a), key(b)) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.cmp(b),
        }
    });
}
