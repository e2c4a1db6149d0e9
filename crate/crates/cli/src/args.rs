use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use graspq::data::{LabelScheme, SplitMode};
use graspq::learn::ModelKind;

#[derive(Debug, Parser)]
#[command(name = "graspq", version, about = "Grasp quality metrics and grasp-success classifiers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Clone, Debug, Default, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Fail instead of skipping records whose metrics cannot be computed.
    #[arg(long, global = true)]
    pub strict: bool,

    #[arg(long, global = true, value_name = "record|cluster")]
    pub split_mode: Option<SplitMode>,

    #[arg(long, global = true, value_name = "binary|ternary|homogeneous")]
    pub label_scheme: Option<LabelScheme>,

    /// Comma-separated metric names, or `all`.
    #[arg(long, global = true, value_name = "LIST")]
    pub metrics: Option<String>,

    #[arg(long, global = true, value_name = "knn|tree")]
    pub model: Option<ModelKind>,

    #[arg(long, global = true, value_name = "N")]
    pub folds: Option<usize>,

    #[arg(long, global = true, value_name = "F")]
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the quality vector of every record.
    ComputeMetrics(ComputeArgs),
    /// Derive binary and ternary labels from execution outcomes.
    Label(LabelArgs),
    /// Split, grid-search, refit and evaluate a classifier.
    Train(TrainArgs),
    /// Score a saved model on a labeled dataset.
    Evaluate(EvaluateArgs),
    /// Combine run reports into a comparison table.
    Report(ReportArgs),
    /// Generate a synthetic dataset and its objects file.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Objects file with centers of mass and normalization constants.
    #[arg(long, value_name = "PATH")]
    pub objects: Option<PathBuf>,
    /// Normalization ranges for q_a1/q_c2; calibrated from the data if absent.
    #[arg(long, value_name = "PATH")]
    pub thresholds: Option<PathBuf>,
    /// Where to write the ranges that were used.
    #[arg(long, value_name = "PATH")]
    pub thresholds_out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    pub cone_edges: Option<usize>,
    /// `distance-max` or a fixed length in meters.
    #[arg(long, value_name = "SCALE")]
    pub torque_scale: Option<String>,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub model_out: PathBuf,
    /// Machine-readable run report (JSON).
    #[arg(long, value_name = "PATH")]
    pub report_out: Option<PathBuf>,
    /// Grid override, e.g. `k=1,3,5` or `max_depth=2,4,inf;min_samples_leaf=1,2`.
    #[arg(long, value_name = "SPEC")]
    pub grid: Option<String>,
    /// Thresholds file the features were normalized with, stored in the model.
    #[arg(long, value_name = "PATH")]
    pub thresholds: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "PATH")]
    pub model_file: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub report_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run reports written by `train` or `evaluate`.
    #[arg(required = true, value_name = "REPORT")]
    pub reports: Vec<PathBuf>,
    /// Write the text table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub latex: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// `ideal`, `separable` or `noisy`.
    #[arg(long, value_name = "NAME")]
    pub preset: String,
    /// Number of records (default 600).
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// Noise level for the `noisy` preset.
    #[arg(long, value_name = "SIGMA")]
    pub sigma: Option<f64>,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub objects_out: PathBuf,
}
