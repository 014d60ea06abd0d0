//! Subcommand implementations and shared argument plumbing.

pub mod benchmark;
pub mod eval;
pub mod similarity;
pub mod split;
pub mod synth;
pub mod train;
pub mod weights;

use std::fmt;
use std::path::Path;

use classbench::dataset::io::{load_dataset, DatasetFormat};
use classbench::dataset::{normalize_dataset, stratified_split, LabeledDataset, SplitRatios};
use classbench::similarity::SubsetChoice;

/// Marker for errors in how the tool was invoked; mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

/// Dataset format flag; `Auto` picks by path shape (directory vs file).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum FormatArg {
    #[default]
    Auto,
    ImageDir,
    FeatureCsv,
}

pub fn load_data(path: &Path, format: FormatArg) -> anyhow::Result<LabeledDataset> {
    let format = match format {
        FormatArg::ImageDir => DatasetFormat::ImageDirs,
        FormatArg::FeatureCsv => DatasetFormat::FeatureCsv,
        FormatArg::Auto => {
            if path.is_dir() {
                DatasetFormat::ImageDirs
            } else {
                DatasetFormat::FeatureCsv
            }
        }
    };
    Ok(load_dataset(path, format)?)
}

/// Loads and, for rasters, normalizes onto [-1, 1] from the given source
/// range. Feature-vector datasets pass through unchanged.
pub fn load_normalized(
    path: &Path,
    format: FormatArg,
    source_range: (f64, f64),
) -> anyhow::Result<LabeledDataset> {
    let ds = load_data(path, format)?;
    Ok(normalize_dataset(&ds, source_range)?)
}

/// Subset selector shared by `eval` and `similarity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SubsetArg {
    Train,
    Val,
    Test,
    All,
}

impl From<SubsetArg> for SubsetChoice {
    fn from(value: SubsetArg) -> Self {
        match value {
            SubsetArg::Train => SubsetChoice::Train,
            SubsetArg::Val => SubsetChoice::Val,
            SubsetArg::Test => SubsetChoice::Test,
            SubsetArg::All => SubsetChoice::All,
        }
    }
}

/// Resolves a subset of the dataset via a stratified split, or the whole
/// dataset for `All`.
pub fn select_subset(
    ds: &LabeledDataset,
    subset: SubsetArg,
    ratios: &SplitRatios,
    split_seed: u64,
) -> anyhow::Result<LabeledDataset> {
    if subset == SubsetArg::All {
        return Ok(ds.clone());
    }
    let (train, val, test) = stratified_split(ds, ratios, split_seed)?;
    Ok(match subset {
        SubsetArg::Train => train,
        SubsetArg::Val => val,
        SubsetArg::Test => test,
        SubsetArg::All => unreachable!(),
    })
}

pub fn parse_ratios(spec: &str) -> anyhow::Result<SplitRatios> {
    let parts = parse_f64_list(spec, "ratios")?;
    if parts.len() != 3 {
        return Err(usage(format!(
            "ratios need exactly 3 comma-separated values, got {}",
            parts.len()
        )));
    }
    SplitRatios::new(parts[0], parts[1], parts[2]).map_err(|e| usage(e.to_string()))
}

pub fn parse_range(spec: &str) -> anyhow::Result<(f64, f64)> {
    let parts = parse_f64_list(spec, "source range")?;
    if parts.len() != 2 {
        return Err(usage("source range needs exactly 2 values `lo,hi`"));
    }
    Ok((parts[0], parts[1]))
}

pub fn parse_f64_list(spec: &str, what: &str) -> anyhow::Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("bad {what} entry `{s}`")))
        })
        .collect()
}

pub fn parse_usize_list(spec: &str, what: &str) -> anyhow::Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad {what} entry `{s}`")))
        })
        .collect()
}
