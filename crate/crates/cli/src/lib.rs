//! Batch front end for the cough-audio ranking pipeline: feature
//! extraction, metric evaluation, entropy-weighted TOPSIS ranking with
//! ensembles, and feature elimination. Every command writes CSV artifacts
//! and a `manifest.json` into its output directory.

pub mod commands;
mod error;
pub mod manifest;
pub mod output;
pub mod report;

pub use commands::evaluate::{cmd_evaluate, EvaluateArgs};
pub use commands::extract::{cmd_extract, ExtractArgs};
pub use commands::pipeline::{cmd_pipeline, PipelineArgs};
pub use commands::rank::{cmd_rank, RankArgs};
pub use commands::rfecv::{cmd_rfecv, RfecvArgs};
pub use commands::{Common, Outcome};
pub use error::{CliError, CliResult, ExitStatus};
