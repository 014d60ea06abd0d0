//! Labeled datasets: class counts, seeded stratified splits, input
//! normalization to `[-1, 1]` and train-time rotation/flip augmentation.

pub mod io;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::mix_seed;

/// Fill value for pixels rotated in from outside the raster. Inputs are
/// normalized to `[-1, 1]` before augmentation, so the background is -1.
pub const ROTATION_FILL: f64 = -1.0;

/// A dense H×W×channels grid of real intensities, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl Raster {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::invalid("raster", "zero-sized dimension"));
        }
        if data.len() != height * width * channels {
            return Err(Error::DimensionMismatch {
                what: "raster data".into(),
                expected: height * width * channels,
                found: data.len(),
            });
        }
        Ok(Raster {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, channels: usize, value: f64) -> Self {
        Raster {
            height,
            width,
            channels,
            data: vec![value; height * width * channels],
        }
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.data[(row * self.width + col) * self.channels + channel]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, channel: usize, value: f64) {
        self.data[(row * self.width + col) * self.channels + channel] = value;
    }

    fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.height, self.width, self.channels)
    }
}

/// Model input: either a raster or a precomputed feature vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Raster(Raster),
    Features(Vec<f64>),
}

impl Input {
    /// Flat view of the input; rasters are already stored row-major.
    pub fn as_slice(&self) -> &[f64] {
        match self {
            Input::Raster(r) => &r.data,
            Input::Features(v) => v,
        }
    }

    pub fn dim(&self) -> usize {
        self.as_slice().len()
    }

    pub fn shape_string(&self) -> String {
        match self {
            Input::Raster(r) => r.shape_string(),
            Input::Features(v) => format!("vec[{}]", v.len()),
        }
    }
}

/// One labeled sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Input,
    pub label: usize,
}

/// Per-class sample counts; all counts are ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    counts: Vec<usize>,
}

impl ClassCounts {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty {
                what: "class counts".into(),
            });
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass {
                name: format!("class {i}"),
            });
        }
        Ok(ClassCounts { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn get(&self, class: usize) -> usize {
        self.counts[class]
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Largest per-class count.
    pub fn n_max(&self) -> usize {
        *self.counts.iter().max().expect("counts are non-empty")
    }
}

/// An immutable collection of labeled samples with stable per-sample ids.
///
/// Invariants enforced at construction: at least 2 classes, every label in
/// range, every class non-empty, all inputs share one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    samples: Vec<Sample>,
    ids: Vec<String>,
    class_names: Vec<String>,
    counts: ClassCounts,
}

impl LabeledDataset {
    pub fn new(samples: Vec<Sample>, class_names: Vec<String>) -> Result<Self> {
        let ids = (0..samples.len()).map(|i| i.to_string()).collect();
        Self::with_ids(samples, ids, class_names)
    }

    pub fn with_ids(
        samples: Vec<Sample>,
        ids: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if class_names.len() < 2 {
            return Err(Error::TooFewClasses {
                found: class_names.len(),
            });
        }
        if samples.is_empty() {
            return Err(Error::Empty {
                what: "dataset".into(),
            });
        }
        if ids.len() != samples.len() {
            return Err(Error::DimensionMismatch {
                what: "sample ids".into(),
                expected: samples.len(),
                found: ids.len(),
            });
        }
        let c = class_names.len();
        let mut counts = vec![0usize; c];
        let expected_shape = samples[0].input.shape_string();
        for (sample, id) in samples.iter().zip(&ids) {
            if sample.label >= c {
                return Err(Error::LabelOutOfRange {
                    label: sample.label,
                    num_classes: c,
                });
            }
            let shape = sample.input.shape_string();
            if shape != expected_shape {
                return Err(Error::InconsistentShape {
                    id: id.clone(),
                    expected: expected_shape,
                    found: shape,
                });
            }
            counts[sample.label] += 1;
        }
        if let Some(i) = counts.iter().position(|&n| n == 0) {
            return Err(Error::EmptyClass {
                name: class_names[i].clone(),
            });
        }
        Ok(LabeledDataset {
            samples,
            ids,
            class_names,
            counts: ClassCounts::new(counts)?,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn counts(&self) -> &ClassCounts {
        &self.counts
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Flattened input dimension shared by all samples.
    pub fn input_dim(&self) -> usize {
        self.samples[0].input.dim()
    }

    /// New dataset holding the samples at `indices`, same class set.
    pub fn subset(&self, indices: &[usize]) -> Result<LabeledDataset> {
        let samples = indices.iter().map(|&i| self.samples[i].clone()).collect();
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        LabeledDataset::with_ids(samples, ids, self.class_names.clone())
    }

    /// Indices of all samples with the given label, in dataset order.
    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.label == class)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A one-hot target: 1 at the true class, 0 elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneHot {
    class: usize,
    num_classes: usize,
}

impl OneHot {
    pub fn class(&self) -> usize {
        self.class
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.num_classes];
        v[self.class] = 1.0;
        v
    }
}

/// Builds the one-hot target vector for `label` over `num_classes` classes.
pub fn one_hot(label: usize, num_classes: usize) -> Result<OneHot> {
    if num_classes < 2 {
        return Err(Error::TooFewClasses { found: num_classes });
    }
    if label >= num_classes {
        return Err(Error::LabelOutOfRange { label, num_classes });
    }
    Ok(OneHot {
        class: label,
        num_classes,
    })
}

/// Train/validation/test fractions summing to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        if train < 0.0 || val < 0.0 || test < 0.0 {
            return Err(Error::invalid("split ratios", "negative ratio"));
        }
        if (train + val + test - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "split ratios",
                format!("must sum to 1, got {}", train + val + test),
            ));
        }
        Ok(SplitRatios { train, val, test })
    }
}

impl Default for SplitRatios {
    /// 65% train, 20% validation, 15% test.
    fn default() -> Self {
        SplitRatios {
            train: 0.65,
            val: 0.20,
            test: 0.15,
        }
    }
}

/// Original-dataset indices assigned to each subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per-class stratified split assignment.
///
/// Each class is shuffled with its own stream derived from `seed`, then the
/// first `floor(n·train)` samples go to train, the next `floor(n·val)` to
/// validation, and the remainder to test. Errors if any class would leave a
/// subset empty.
pub fn stratified_split_indices(
    ds: &LabeledDataset,
    ratios: &SplitRatios,
    seed: u64,
) -> Result<SplitIndices> {
    let mut out = SplitIndices {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    for class in 0..ds.num_classes() {
        let mut indices = ds.class_indices(class);
        let n = indices.len();
        let n_train = (n as f64 * ratios.train).floor() as usize;
        let n_val = (n as f64 * ratios.val).floor() as usize;
        let n_test = n - n_train - n_val;
        if n_train == 0 || n_val == 0 || n_test == 0 {
            return Err(Error::ClassTooSmall {
                name: ds.class_names()[class].clone(),
                count: n,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, class as u64));
        indices.shuffle(&mut rng);
        out.train.extend_from_slice(&indices[..n_train]);
        out.val
            .extend_from_slice(&indices[n_train..n_train + n_val]);
        out.test.extend_from_slice(&indices[n_train + n_val..]);
    }
    out.train.sort_unstable();
    out.val.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}

/// Stratified split into (train, val, test) datasets. See
/// [`stratified_split_indices`] for the assignment rule.
pub fn stratified_split(
    ds: &LabeledDataset,
    ratios: &SplitRatios,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset, LabeledDataset)> {
    let idx = stratified_split_indices(ds, ratios, seed)?;
    Ok((
        ds.subset(&idx.train)?,
        ds.subset(&idx.val)?,
        ds.subset(&idx.test)?,
    ))
}

/// Affine map of intensities from `[lo, hi]` onto `[-1, 1]`.
///
/// `lo` maps to exactly -1 and `hi` to exactly +1; any intensity outside the
/// declared range is an error.
pub fn normalize_raster(r: &Raster, source_range: (f64, f64)) -> Result<Raster> {
    let (lo, hi) = source_range;
    if hi <= lo || !hi.is_finite() || !lo.is_finite() {
        return Err(Error::invalid(
            "source range",
            format!("hi ({hi}) must exceed lo ({lo})"),
        ));
    }
    let span = hi - lo;
    let mut data = Vec::with_capacity(r.data.len());
    for &v in &r.data {
        if v < lo || v > hi || !v.is_finite() {
            return Err(Error::IntensityOutOfRange { value: v, lo, hi });
        }
        data.push(-1.0 + 2.0 * (v - lo) / span);
    }
    Ok(Raster {
        height: r.height,
        width: r.width,
        channels: r.channels,
        data,
    })
}

/// Applies [`normalize_raster`] to every raster sample; feature-vector
/// samples pass through unchanged.
pub fn normalize_dataset(ds: &LabeledDataset, source_range: (f64, f64)) -> Result<LabeledDataset> {
    let samples = ds
        .samples()
        .iter()
        .map(|s| match &s.input {
            Input::Raster(r) => Ok(Sample {
                input: Input::Raster(normalize_raster(r, source_range)?),
                label: s.label,
            }),
            Input::Features(_) => Ok(s.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledDataset::with_ids(samples, ds.ids().to_vec(), ds.class_names().to_vec())
}

/// Random rotation plus optional horizontal/vertical flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentPolicy {
    /// Closed interval of rotation angles in degrees, within [-180, 180].
    pub rotation_degrees: (f64, f64),
    pub flip_horizontal: bool,
    pub flip_vertical: bool,
}

impl AugmentPolicy {
    pub fn new(
        rotation_degrees: (f64, f64),
        flip_horizontal: bool,
        flip_vertical: bool,
    ) -> Result<Self> {
        let (lo, hi) = rotation_degrees;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < -180.0 || hi > 180.0 {
            return Err(Error::invalid(
                "rotation interval",
                format!("[{lo}, {hi}] must lie within [-180, 180]"),
            ));
        }
        Ok(AugmentPolicy {
            rotation_degrees,
            flip_horizontal,
            flip_vertical,
        })
    }
}

impl Default for AugmentPolicy {
    /// Full-circle rotation with both flips enabled.
    fn default() -> Self {
        AugmentPolicy {
            rotation_degrees: (-180.0, 180.0),
            flip_horizontal: true,
            flip_vertical: true,
        }
    }
}

/// Rotates the raster content by `angle_degrees` about the raster center
/// using nearest-neighbor resampling; uncovered pixels get [`ROTATION_FILL`].
pub fn rotate_raster(r: &Raster, angle_degrees: f64) -> Raster {
    let theta = angle_degrees.to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let cy = (r.height as f64 - 1.0) / 2.0;
    let cx = (r.width as f64 - 1.0) / 2.0;
    let mut out = Raster::filled(r.height, r.width, r.channels, ROTATION_FILL);
    for row in 0..r.height {
        for col in 0..r.width {
            let xd = col as f64 - cx;
            let yd = row as f64 - cy;
            let src_col = (cx + cos_t * xd - sin_t * yd).round();
            let src_row = (cy + sin_t * xd + cos_t * yd).round();
            if src_row >= 0.0
                && src_col >= 0.0
                && (src_row as usize) < r.height
                && (src_col as usize) < r.width
            {
                let (sr, sc) = (src_row as usize, src_col as usize);
                for ch in 0..r.channels {
                    out.set(row, col, ch, r.at(sr, sc, ch));
                }
            }
        }
    }
    out
}

/// Mirrors columns (left-right).
pub fn flip_horizontal(r: &Raster) -> Raster {
    let mut out = r.clone();
    for row in 0..r.height {
        for col in 0..r.width {
            for ch in 0..r.channels {
                out.set(row, col, ch, r.at(row, r.width - 1 - col, ch));
            }
        }
    }
    out
}

/// Mirrors rows (top-bottom).
pub fn flip_vertical(r: &Raster) -> Raster {
    let mut out = r.clone();
    for row in 0..r.height {
        for col in 0..r.width {
            for ch in 0..r.channels {
                out.set(row, col, ch, r.at(r.height - 1 - row, col, ch));
            }
        }
    }
    out
}

/// Applies the augmentation policy to a raster sample: one rotation angle
/// drawn uniformly from the policy interval, then each enabled flip with
/// probability 1/2. Feature-vector samples pass through unchanged. The label
/// is never altered. Draw order is fixed (angle, horizontal coin, vertical
/// coin) so results are deterministic for a given RNG state.
pub fn augment<R: Rng>(sample: &Sample, policy: &AugmentPolicy, rng: &mut R) -> Sample {
    let raster = match &sample.input {
        Input::Features(_) => return sample.clone(),
        Input::Raster(r) => r,
    };
    let (lo, hi) = policy.rotation_degrees;
    let angle = rng.random_range(lo..=hi);
    let mut out = if angle == 0.0 {
        raster.clone()
    } else {
        rotate_raster(raster, angle)
    };
    if policy.flip_horizontal && rng.random_bool(0.5) {
        out = flip_horizontal(&out);
    }
    if policy.flip_vertical && rng.random_bool(0.5) {
        out = flip_vertical(&out);
    }
    Sample {
        input: Input::Raster(out),
        label: sample.label,
    }
}
