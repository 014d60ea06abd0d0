//! `classbench split` — stratified split manifest plus a per-class summary.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::dataset::{stratified_split_indices, SplitRatios};

use super::{load_data, parse_ratios, FormatArg};
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct SplitArgs {
    /// Dataset: class-per-subdirectory rasters or a feature CSV
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Split ratios as `train,val,test` (default 0.65,0.20,0.15)
    #[arg(long)]
    pub ratios: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file name within the output directory
    #[arg(long, default_value = "splits.csv")]
    pub file: String,
}

const SUBSETS: [&str; 3] = ["train", "val", "test"];

pub fn run(args: SplitArgs, out_dir: &Path) -> anyhow::Result<()> {
    let ratios = match &args.ratios {
        Some(spec) => parse_ratios(spec)?,
        None => SplitRatios::default(),
    };
    let ds = load_data(&args.data, args.format)?;
    let idx = stratified_split_indices(&ds, &ratios, args.seed)?;

    // subset index per original sample
    let mut assignment = vec![0u8; ds.len()];
    for (tag, members) in [&idx.train, &idx.val, &idx.test].into_iter().enumerate() {
        for &i in members {
            assignment[i] = tag as u8;
        }
    }

    let mut csv = String::from("sample_id,subset\n");
    for (id, &tag) in ds.ids().iter().zip(&assignment) {
        csv.push_str(&format!("{id},{}\n", SUBSETS[tag as usize]));
    }

    let mut manifest = ManifestBuilder::new(
        "split",
        json!({
            "data": args.data.display().to_string(),
            "ratios": ratios,
            "seed": args.seed,
        }),
    );
    manifest.seeds(json!({ "master": args.seed }));
    let out_file = out_dir.join(&args.file);
    manifest.write_artifact(&out_file, &csv)?;
    manifest.finish(out_dir)?;

    print_summary(&ds, &assignment);
    println!("wrote {}", out_file.display());
    Ok(())
}

fn print_summary(ds: &classbench::LabeledDataset, assignment: &[u8]) {
    let c = ds.num_classes();
    let mut per_class = vec![[0usize; 3]; c];
    for (sample, &tag) in ds.samples().iter().zip(assignment) {
        per_class[sample.label][tag as usize] += 1;
    }
    let name_width = ds
        .class_names()
        .iter()
        .map(|n| n.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let max_count = per_class
        .iter()
        .map(|counts| counts.iter().sum::<usize>())
        .max()
        .unwrap_or(1);
    println!("{:<name_width$}  train   val  test", "class");
    for (class, counts) in per_class.iter().enumerate() {
        let total: usize = counts.iter().sum();
        let width = (total * 40).div_ceil(max_count.max(1));
        let train_w = counts[0] * width / total.max(1);
        let val_w = counts[1] * width / total.max(1);
        let test_w = width.saturating_sub(train_w + val_w);
        println!(
            "{:<name_width$}  {:>5} {:>5} {:>5}  {}{}{}",
            ds.class_names()[class],
            counts[0],
            counts[1],
            counts[2],
            "#".repeat(train_w),
            "=".repeat(val_w),
            ".".repeat(test_w),
        );
    }
}
