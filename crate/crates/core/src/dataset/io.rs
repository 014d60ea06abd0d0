//! On-disk dataset formats.
//!
//! Two source layouts are supported:
//! - raster directories: `<root>/<class_name>/*.ppm|*.pgm` (plain ASCII P2/P3)
//! - feature tables: CSV with header `label,f0,...,fK`, one row per sample
//!
//! Class order is always lexicographic over class names so the class index
//! assignment is reproducible without knowing per-class counts.

use std::fs;
use std::path::Path;

use crate::dataset::{ClassCounts, Input, LabeledDataset, Raster, Sample};
use crate::error::{Error, Result};

/// Dataset source format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    /// Class-per-subdirectory raster files.
    ImageDirs,
    /// Labeled CSV feature table.
    FeatureCsv,
}

/// Loads a dataset in the given format.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<LabeledDataset> {
    match format {
        DatasetFormat::ImageDirs => load_image_dirs(path),
        DatasetFormat::FeatureCsv => load_feature_csv(path),
    }
}

fn load_image_dirs(root: &Path) -> Result<LabeledDataset> {
    let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut class_dirs: Vec<(String, std::path::PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if path.is_dir() {
            let name = entry.file_name().to_string_lossy().into_owned();
            class_dirs.push((name, path));
        }
    }
    class_dirs.sort_by(|a, b| a.0.cmp(&b.0));
    if class_dirs.len() < 2 {
        return Err(Error::TooFewClasses {
            found: class_dirs.len(),
        });
    }

    let mut samples = Vec::new();
    let mut ids = Vec::new();
    for (label, (class_name, dir)) in class_dirs.iter().enumerate() {
        let mut files: Vec<std::path::PathBuf> = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .map(|e| {
                        let e = e.to_ascii_lowercase();
                        e == "ppm" || e == "pgm"
                    })
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Error::EmptyClass {
                name: class_name.clone(),
            });
        }
        for file in files {
            let raster = read_pnm(&file)?;
            let file_name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            ids.push(format!("{class_name}/{file_name}"));
            samples.push(Sample {
                input: Input::Raster(raster),
                label,
            });
        }
    }
    let class_names = class_dirs.into_iter().map(|(name, _)| name).collect();
    LabeledDataset::with_ids(samples, ids, class_names)
}

/// Parses a plain (ASCII) PGM `P2` or PPM `P3` file.
pub fn read_pnm(path: &Path) -> Result<Raster> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    // Strip comments: '#' to end of line.
    let cleaned: String = content
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let mut tokens = cleaned.split_whitespace();
    let magic = tokens
        .next()
        .ok_or_else(|| Error::parse(path, "empty file"))?;
    let channels = match magic {
        "P2" => 1,
        "P3" => 3,
        other => {
            return Err(Error::parse(
                path,
                format!("unsupported magic `{other}` (expected plain P2 or P3)"),
            ))
        }
    };
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::parse(path, format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|_| Error::parse(path, format!("bad {what}")))
    };
    let width = next_usize("width")?;
    let height = next_usize("height")?;
    let maxval = next_usize("maxval")?;
    if maxval == 0 {
        return Err(Error::parse(path, "maxval must be positive"));
    }
    let expected = width * height * channels;
    let mut data = Vec::with_capacity(expected);
    for token in tokens {
        let v: usize = token
            .parse()
            .map_err(|_| Error::parse(path, format!("bad pixel value `{token}`")))?;
        if v > maxval {
            return Err(Error::parse(
                path,
                format!("pixel value {v} exceeds maxval {maxval}"),
            ));
        }
        data.push(v as f64);
    }
    if data.len() != expected {
        return Err(Error::parse(
            path,
            format!("expected {expected} pixel values, found {}", data.len()),
        ));
    }
    Raster::new(height, width, channels, data)
}

fn load_feature_csv(path: &Path) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::parse(path, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, e.to_string()))?
        .clone();
    if headers.is_empty() || headers.get(0) != Some("label") {
        return Err(Error::parse(path, "first column must be `label`"));
    }
    let feature_dim = headers.len() - 1;
    if feature_dim == 0 {
        return Err(Error::parse(path, "no feature columns"));
    }

    let mut raw: Vec<(String, Vec<f64>)> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e.to_string()))?;
        if record.len() != headers.len() {
            return Err(Error::parse(
                path,
                format!(
                    "row {}: expected {} fields, found {}",
                    row_idx + 1,
                    headers.len(),
                    record.len()
                ),
            ));
        }
        let label = record.get(0).unwrap_or_default().to_string();
        let mut features = Vec::with_capacity(feature_dim);
        for field in record.iter().skip(1) {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::parse(path, format!("row {}: bad feature `{field}`", row_idx + 1))
            })?;
            features.push(v);
        }
        raw.push((label, features));
    }
    if raw.is_empty() {
        return Err(Error::Empty {
            what: format!("feature table {}", path.display()),
        });
    }

    let mut class_names: Vec<String> = raw.iter().map(|(l, _)| l.clone()).collect();
    class_names.sort();
    class_names.dedup();
    if class_names.len() < 2 {
        return Err(Error::TooFewClasses {
            found: class_names.len(),
        });
    }

    let mut samples = Vec::with_capacity(raw.len());
    let mut ids = Vec::with_capacity(raw.len());
    for (i, (label, features)) in raw.into_iter().enumerate() {
        let class = class_names
            .binary_search(&label)
            .expect("label came from the same collection");
        samples.push(Sample {
            input: Input::Features(features),
            label: class,
        });
        ids.push(i.to_string());
    }
    LabeledDataset::with_ids(samples, ids, class_names)
}

/// Writes a feature-vector dataset as `label,f0,...,fK` CSV.
pub fn write_feature_csv(ds: &LabeledDataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("label");
    for k in 0..ds.input_dim() {
        out.push_str(&format!(",f{k}"));
    }
    out.push('\n');
    for sample in ds.samples() {
        let features = match &sample.input {
            Input::Features(v) => v,
            Input::Raster(_) => {
                return Err(Error::invalid(
                    "feature csv export",
                    "dataset holds rasters, not feature vectors",
                ))
            }
        };
        out.push_str(&ds.class_names()[sample.label]);
        for v in features {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads a `class_name,count` CSV into class names and counts.
pub fn read_counts_csv(path: &Path) -> Result<(Vec<String>, ClassCounts)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::parse(path, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, e.to_string()))?;
    if headers.get(0) != Some("class_name") || headers.get(1) != Some("count") {
        return Err(Error::parse(path, "expected header `class_name,count`"));
    }
    let mut names = Vec::new();
    let mut counts = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e.to_string()))?;
        let name = record.get(0).unwrap_or_default().to_string();
        let count: usize = record
            .get(1)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, format!("row {}: bad count", row_idx + 1)))?;
        names.push(name);
        counts.push(count);
    }
    Ok((names, ClassCounts::new(counts)?))
}
