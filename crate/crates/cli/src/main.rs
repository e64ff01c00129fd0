use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coughrank_cli::{
    cmd_evaluate, cmd_extract, cmd_pipeline, cmd_rank, cmd_rfecv, CliResult, Common, EvaluateArgs,
    ExitStatus, ExtractArgs, Outcome, PipelineArgs, RankArgs, RfecvArgs,
};

#[derive(Parser, Debug)]
#[command(
    name = "coughrank",
    version,
    about = "Cough-audio classifier ranking pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// TOML configuration file
    #[arg(long, env = "COUGHRANK_CONFIG")]
    config: Option<PathBuf>,
    /// Overrides the configured seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl From<CommonOpts> for Common {
    fn from(o: CommonOpts) -> Self {
        Common {
            config: o.config,
            seed: o.seed,
            out: o.out,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract 193 audio features from every WAV file in a directory
    Extract {
        input_dir: PathBuf,
        /// sample_id,label file (defaults to labels.csv in the input directory)
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Turn predictions into per-strategy decision matrices
    Evaluate {
        predictions: Option<PathBuf>,
        /// model,strategy,threshold file
        #[arg(long)]
        thresholds: Option<PathBuf>,
        /// Validate ready-made decision matrices instead of predictions
        #[arg(long = "matrix")]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        criteria: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Weight, rank and ensemble one decision matrix per strategy
    Rank {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        criteria: Option<PathBuf>,
        /// criterion,weight file replacing entropy weights
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Closeness gap still counted as a tie in the hard ensemble
        #[arg(long)]
        tie_eps: Option<f64>,
        /// Decimals closeness is rounded to before hard ranking; negative disables
        #[arg(long, allow_hyphen_values = true)]
        tie_decimals: Option<i32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Train, evaluate, rank and ensemble end to end
    Pipeline {
        features: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Extra prediction files from other models
        #[arg(long)]
        external: Vec<PathBuf>,
        #[arg(long)]
        external_thresholds: Option<PathBuf>,
        #[arg(long)]
        criteria: Option<PathBuf>,
        /// Run feature elimination first
        #[arg(long)]
        select_features: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Recursive feature elimination with cross-validation
    Rfecv {
        features: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn dispatch(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Extract {
            input_dir,
            labels,
            common,
        } => cmd_extract(&ExtractArgs {
            input_dir,
            labels,
            common: common.into(),
        }),
        Command::Evaluate {
            predictions,
            thresholds,
            matrices,
            criteria,
            common,
        } => cmd_evaluate(&EvaluateArgs {
            predictions,
            thresholds,
            matrices,
            criteria,
            common: common.into(),
        }),
        Command::Rank {
            matrices,
            criteria,
            weights,
            tie_eps,
            tie_decimals,
            common,
        } => cmd_rank(&RankArgs {
            matrices,
            criteria,
            weights,
            tie_eps,
            tie_decimals,
            common: common.into(),
        }),
        Command::Pipeline {
            features,
            labels,
            external,
            external_thresholds,
            criteria,
            select_features,
            common,
        } => cmd_pipeline(&PipelineArgs {
            features,
            labels,
            external,
            external_thresholds,
            criteria,
            select_features,
            common: common.into(),
        }),
        Command::Rfecv {
            features,
            labels,
            common,
        } => cmd_rfecv(&RfecvArgs {
            features,
            labels,
            common: common.into(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            for flag in &outcome.flags {
                eprintln!("degenerate: {flag}");
            }
            ExitCode::from(outcome.status().code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let status = if e.status == ExitStatus::Success {
                ExitStatus::Internal
            } else {
                e.status
            };
            ExitCode::from(status.code() as u8)
        }
    }
}
