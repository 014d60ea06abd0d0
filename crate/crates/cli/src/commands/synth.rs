//! `classbench synth` — seeded Gaussian-blob feature dataset, written as a
//! `label,f0,...,fK` CSV.

use std::path::Path;

use serde_json::json;

use classbench::dataset::io::write_feature_csv;
use classbench::synth::{gaussian_blobs, imbalance_benchmark_blobs, BlobsSpec};

use super::{parse_f64_list, parse_usize_list, usage};
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    /// Samples per class, e.g. `500,400,300,50,20`
    #[arg(long, default_value = "500,400,300,50,20")]
    pub counts: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Distance of class means from the origin (ignored with --centers)
    #[arg(long, default_value_t = 3.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit class means, semicolon-separated: `0,0;8,0;0,8`
    #[arg(long)]
    pub centers: Option<String>,
    /// Use the bundled imbalance benchmark dataset, overriding other knobs
    #[arg(long)]
    pub preset_imbalance: bool,
    /// Output file name within the output directory
    #[arg(long, default_value = "synth.csv")]
    pub file: String,
}

fn parse_centers(spec: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    spec.split(';')
        .map(|group| parse_f64_list(group, "center"))
        .collect()
}

pub fn run(args: SynthArgs, out_dir: &Path) -> anyhow::Result<()> {
    let spec = if args.preset_imbalance {
        imbalance_benchmark_blobs()
    } else {
        BlobsSpec {
            counts: parse_usize_list(&args.counts, "counts")?,
            dim: args.dim,
            separation: args.separation,
            noise_std: args.noise,
            seed: args.seed,
            centers: args.centers.as_deref().map(parse_centers).transpose()?,
        }
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let ds = gaussian_blobs(&spec)?;

    let mut manifest = ManifestBuilder::new("synth", serde_json::to_value(&spec)?);
    manifest.seeds(json!({ "master": spec.seed }));
    let out_file = out_dir.join(&args.file);
    write_feature_csv(&ds, &out_file)?;
    manifest.record_artifact(&out_file);
    manifest.finish(out_dir)?;

    println!(
        "wrote {} ({} samples, {} classes)",
        out_file.display(),
        ds.len(),
        ds.num_classes()
    );
    Ok(())
}
