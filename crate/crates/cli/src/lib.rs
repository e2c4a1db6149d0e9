//! Command-line pipeline: synthesize or ingest grasp records, compute
//! quality metrics, label executions, train and evaluate classifiers and
//! render comparison tables.

pub mod args;
pub mod compute;
pub mod config;
pub mod io;
pub mod label;
pub mod report;
pub mod synth;
pub mod train;

use anyhow::Result;

use args::{Cli, Command};
use config::RunConfig;

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::resolve(&cli.global)?;
    log::debug!("{cfg:?}");
    match &cli.command {
        Command::ComputeMetrics(a) => compute::run(a, &cfg),
        Command::Label(a) => label::run(a),
        Command::Train(a) => train::run_train(a, &cfg),
        Command::Evaluate(a) => train::run_evaluate(a, &cfg),
        Command::Report(a) => report::run(a),
        Command::Synth(a) => synth::run(a, cfg.seed),
    }
}
