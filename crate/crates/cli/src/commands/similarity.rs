//! `classbench similarity` — inter-class cosine-similarity matrix from the
//! model's penultimate features.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::dataset::SplitRatios;
use classbench::model::Model;
use classbench::similarity::{similarity_matrix, SimilarityConfig};

use super::{load_normalized, parse_range, parse_ratios, select_subset, FormatArg, SubsetArg};
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct SimilarityArgs {
    /// Model checkpoint whose feature tap is used
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Sample pairs averaged per matrix cell
    #[arg(long, default_value_t = 30)]
    pub pairs: usize,
    /// Seed for the pair draws
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which split subset feeds the sampling
    #[arg(long, value_enum, default_value_t = SubsetArg::Test)]
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
    /// Output file name within the output directory
    #[arg(long, default_value = "similarity.csv")]
    pub file: String,
}

pub fn run(args: SimilarityArgs, out_dir: &Path) -> anyhow::Result<()> {
    let source_range = parse_range(&args.source_range)?;
    let ratios = match &args.ratios {
        Some(spec) => parse_ratios(spec)?,
        None => SplitRatios::default(),
    };
    let model = Model::load_json(&args.model)?;
    let ds = load_normalized(&args.data, args.format, source_range)?;
    let subset = select_subset(&ds, args.subset, &ratios, args.split_seed)?;

    let cfg = SimilarityConfig {
        pairs_per_cell: args.pairs,
        seed: args.seed,
        source_subset: args.subset.into(),
    };
    let matrix = similarity_matrix(&model, &subset, &cfg)?;

    let mut manifest = ManifestBuilder::new(
        "similarity",
        json!({
            "model": args.model.display().to_string(),
            "data": args.data.display().to_string(),
            "similarity": cfg,
            "ratios": ratios,
            "split_seed": args.split_seed,
        }),
    );
    manifest.seeds(json!({ "similarity": args.seed, "split": args.split_seed }));

    let out_file = out_dir.join(&args.file);
    manifest.write_artifact(&out_file, &matrix.to_csv_string())?;
    manifest.finish(out_dir)?;

    println!("wrote {}", out_file.display());
    Ok(())
}
