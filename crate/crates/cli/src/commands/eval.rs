//! `classbench eval` — confusion matrices (raw and row-normalized) and a
//! metrics JSON for a saved checkpoint.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::dataset::SplitRatios;
use classbench::metrics::metrics_report;
use classbench::model::Model;
use classbench::trainer::evaluate;

use super::{load_normalized, parse_range, parse_ratios, select_subset, FormatArg, SubsetArg};
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Model checkpoint written by `train`
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Which split subset to evaluate
    #[arg(long, value_enum, default_value_t = SubsetArg::All)]
    pub subset: SubsetArg,
    /// Split ratios as `train,val,test` (with --subset != all)
    #[arg(long)]
    pub ratios: Option<String>,
    /// Split seed (with --subset != all)
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
    /// Raster source intensity range as `lo,hi`
    #[arg(long, default_value = "0,255")]
    pub source_range: String,
}

pub fn run(args: EvalArgs, out_dir: &Path) -> anyhow::Result<()> {
    let source_range = parse_range(&args.source_range)?;
    let ratios = match &args.ratios {
        Some(spec) => parse_ratios(spec)?,
        None => SplitRatios::default(),
    };
    let model = Model::load_json(&args.model)?;
    let ds = load_normalized(&args.data, args.format, source_range)?;
    let subset = select_subset(&ds, args.subset, &ratios, args.split_seed)?;

    let cm = evaluate(&model, &subset)?;
    let report = metrics_report(&cm)?;

    let mut manifest = ManifestBuilder::new(
        "eval",
        json!({
            "model": args.model.display().to_string(),
            "data": args.data.display().to_string(),
            "subset": format!("{:?}", args.subset),
            "ratios": ratios,
            "split_seed": args.split_seed,
        }),
    );
    manifest.seeds(json!({ "split": args.split_seed }));

    let counts_path = out_dir.join("confusion_counts.csv");
    manifest.write_artifact(&counts_path, &cm.to_counts_csv())?;
    let normalized_path = out_dir.join("confusion_normalized.csv");
    manifest.write_artifact(&normalized_path, &cm.to_normalized_csv())?;

    let metrics_path = out_dir.join("metrics.json");
    let metrics_json = serde_json::to_string_pretty(&json!({
        "class_names": cm.class_names(),
        "metrics": report,
        "samples": cm.total(),
    }))?;
    manifest.write_artifact(&metrics_path, &metrics_json)?;
    manifest.finish(out_dir)?;

    println!(
        "micro_f1={:.4} over {} samples",
        report.micro_f1,
        cm.total()
    );
    println!("wrote {}", counts_path.display());
    println!("wrote {}", normalized_path.display());
    println!("wrote {}", metrics_path.display());
    Ok(())
}
