//! `classbench train` — one training run; writes a model checkpoint and the
//! per-epoch history CSV.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::dataset::stratified_split;
use classbench::trainer::train;

use super::{load_normalized, FormatArg};
use crate::config::ConfigOverrides;
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
    /// Checkpoint file name within the output directory
    #[arg(long, default_value = "model.json")]
    pub model_file: String,
    /// History file name within the output directory
    #[arg(long, default_value = "history.csv")]
    pub history_file: String,
}

pub fn run(args: TrainArgs, out_dir: &Path) -> anyhow::Result<()> {
    let run_cfg = args.overrides.resolve()?;
    let ds = load_normalized(&args.data, args.format, run_cfg.source_range)?;
    let arch = run_cfg.arch(&ds);
    let cfg = run_cfg.train_config(&ds)?;
    let (train_set, val_set, _) = stratified_split(&ds, &run_cfg.ratios, cfg.seed)?;

    let (model, history) = train(&train_set, &val_set, &arch, &cfg)?;

    let mut manifest = ManifestBuilder::new(
        "train",
        json!({
            "data": args.data.display().to_string(),
            "run": run_cfg,
            "resolved_loss": cfg.loss,
            "arch": arch,
        }),
    );
    manifest.seeds(json!({ "master": cfg.seed, "split": cfg.seed }));

    let model_path = out_dir.join(&args.model_file);
    model.save_json(&model_path)?;
    manifest.record_artifact(&model_path);

    let history_path = out_dir.join(&args.history_file);
    manifest.write_artifact(&history_path, &history.to_csv_string())?;
    manifest.finish(out_dir)?;

    if let Some(last) = history.epochs.last() {
        println!(
            "trained {} epochs: train_f1={:.4} val_f1={:.4}",
            history.epochs.len(),
            last.train_f1,
            last.val_f1
        );
    }
    println!("wrote {}", model_path.display());
    println!("wrote {}", history_path.display());
    Ok(())
}
