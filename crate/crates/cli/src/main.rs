//! `classbench` — reproducible imbalanced-classification runs from the
//! command line. Every subcommand writes its numeric artifacts plus a
//! `run_manifest.json` describing the resolved configuration and seeds.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::UsageError;

#[derive(Parser)]
#[command(
    name = "classbench",
    version,
    about = "Benchmark toolkit for multiclass classification under class imbalance"
)]
struct Cli {
    /// Output directory for artifacts (default: $CLASSBENCH_OUT_DIR, else `.`)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a seeded synthetic Gaussian-blob feature dataset
    Synth(commands::synth::SynthArgs),
    /// Stratified train/val/test split; writes a sample_id,subset manifest
    Split(commands::split::SplitArgs),
    /// Derive per-class loss weights and write them as CSV
    Weights(commands::weights::WeightsArgs),
    /// Train a classifier; writes a checkpoint and a per-epoch history CSV
    Train(commands::train::TrainArgs),
    /// Evaluate a checkpoint; writes confusion matrices and metrics
    Eval(commands::eval::EvalArgs),
    /// Replicated train/test benchmark with mean ± std report
    Benchmark(commands::benchmark::BenchmarkArgs),
    /// Inter-class cosine-similarity matrix from model features
    Similarity(commands::similarity::SimilarityArgs),
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os("CLASSBENCH_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let result = (|| -> anyhow::Result<()> {
        std::fs::create_dir_all(&out_dir)?;
        match cli.command {
            Command::Synth(args) => commands::synth::run(args, &out_dir),
            Command::Split(args) => commands::split::run(args, &out_dir),
            Command::Weights(args) => commands::weights::run(args, &out_dir),
            Command::Train(args) => commands::train::run(args, &out_dir),
            Command::Eval(args) => commands::eval::run(args, &out_dir),
            Command::Benchmark(args) => commands::benchmark::run(args, &out_dir),
            Command::Similarity(args) => commands::similarity::run(args, &out_dir),
        }
    })();

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let usage = err.downcast_ref::<UsageError>().is_some();
            let kind = if usage { "usage" } else { "runtime" };
            eprintln!(
                "{}",
                serde_json::json!({ "error": format!("{err:#}"), "kind": kind })
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
