//! `classbench benchmark` — replicated train/test protocol; writes the
//! aggregate report as JSON and as a one-row CSV.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::trainer::{replication_seeds, run_benchmark};

use super::{load_normalized, FormatArg};
use crate::config::ConfigOverrides;
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    #[command(flatten)]
    pub overrides: ConfigOverrides,
}

pub fn run(args: BenchmarkArgs, out_dir: &Path) -> anyhow::Result<()> {
    let run_cfg = args.overrides.resolve()?;
    let ds = load_normalized(&args.data, args.format, run_cfg.source_range)?;
    let arch = run_cfg.arch(&ds);
    let cfg = run_cfg.train_config(&ds)?;

    let report = run_benchmark(&ds, &arch, &cfg)?;

    let mut manifest = ManifestBuilder::new(
        "benchmark",
        json!({
            "data": args.data.display().to_string(),
            "run": run_cfg,
            "resolved_loss": cfg.loss,
            "arch": arch,
        }),
    );
    manifest.seeds(json!({
        "master": cfg.seed,
        "replications": replication_seeds(cfg.seed, cfg.replications),
    }));

    let json_path = out_dir.join("report.json");
    manifest.write_artifact(&json_path, &serde_json::to_string_pretty(&report)?)?;
    let csv_path = out_dir.join("report.csv");
    manifest.write_artifact(&csv_path, &report.to_csv_string())?;
    manifest.finish(out_dir)?;

    println!(
        "test_f1 = {:.4} ± {:.4} over {} replications ({} parameters)",
        report.test_f1_mean, report.test_f1_std, report.replications, report.parameter_count
    );
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}
