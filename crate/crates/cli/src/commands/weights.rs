//! `classbench weights` — per-class loss weights as a `class_name,weight`
//! CSV, derived from dataset counts or taken verbatim from a file.

use std::path::{Path, PathBuf};

use serde_json::json;

use classbench::dataset::io::read_counts_csv;
use classbench::dataset::ClassCounts;
use classbench::losses::{inverse_proportion_weights, read_weights_csv, weights_to_csv_string};

use super::{load_data, usage, FormatArg};
use crate::manifest::ManifestBuilder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum StrategyArg {
    #[default]
    InverseProportion,
    Explicit,
}

#[derive(Debug, clap::Args)]
pub struct WeightsArgs {
    /// Dataset to count classes from (alternative to --counts-csv)
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// `class_name,count` CSV (alternative to --data)
    #[arg(long)]
    pub counts_csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StrategyArg::InverseProportion)]
    pub strategy: StrategyArg,
    /// `class_name,weight` CSV taken verbatim (with --strategy explicit)
    #[arg(long)]
    pub explicit_file: Option<PathBuf>,
    /// Output file name within the output directory
    #[arg(long, default_value = "weights.csv")]
    pub file: String,
}

pub fn run(args: WeightsArgs, out_dir: &Path) -> anyhow::Result<()> {
    let (names, counts): (Vec<String>, Option<ClassCounts>) = match (&args.data, &args.counts_csv)
    {
        (Some(path), None) => {
            let ds = load_data(path, args.format)?;
            (ds.class_names().to_vec(), Some(ds.counts().clone()))
        }
        (None, Some(path)) => {
            let (names, counts) = read_counts_csv(path)?;
            (names, Some(counts))
        }
        (None, None) if args.strategy == StrategyArg::Explicit => (Vec::new(), None),
        _ => {
            return Err(usage(
                "provide exactly one of --data or --counts-csv (or --strategy explicit with --explicit-file)",
            ))
        }
    };

    let (names, weights) = match args.strategy {
        StrategyArg::InverseProportion => {
            let counts = counts
                .ok_or_else(|| usage("inverse-proportion weights need --data or --counts-csv"))?;
            (names, inverse_proportion_weights(&counts))
        }
        StrategyArg::Explicit => {
            let path = args
                .explicit_file
                .as_ref()
                .ok_or_else(|| usage("--strategy explicit requires --explicit-file"))?;
            let (file_names, weights) = read_weights_csv(path)?;
            if !names.is_empty() && names != file_names {
                return Err(usage(
                    "explicit weight file classes do not match the dataset",
                ));
            }
            (file_names, weights)
        }
    };

    let mut manifest = ManifestBuilder::new(
        "weights",
        json!({
            "data": args.data.as_ref().map(|p| p.display().to_string()),
            "counts_csv": args.counts_csv.as_ref().map(|p| p.display().to_string()),
            "strategy": format!("{:?}", args.strategy),
            "explicit_file": args.explicit_file.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let out_file = out_dir.join(&args.file);
    manifest.write_artifact(&out_file, &weights_to_csv_string(&names, &weights))?;
    manifest.finish(out_dir)?;

    println!("wrote {} ({} classes)", out_file.display(), weights.len());
    Ok(())
}
