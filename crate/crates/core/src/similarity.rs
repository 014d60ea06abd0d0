//! Feature-space cosine similarity between classes.
//!
//! For each unordered class pair, N sample pairs are drawn (one member from
//! each class), features are read from the model's penultimate tap, and the
//! mean cosine is reported. The diagonal is 1 by definition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::seeding::mix_seed;

/// Which split subset feeds the pair sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SubsetChoice {
    Train,
    Val,
    #[default]
    Test,
    All,
}

/// Pair-sampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimilarityConfig {
    /// Sample pairs averaged per matrix cell.
    pub pairs_per_cell: usize,
    pub seed: u64,
    pub source_subset: SubsetChoice,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            pairs_per_cell: 30,
            seed: 0,
            source_subset: SubsetChoice::Test,
        }
    }
}

impl SimilarityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pairs_per_cell == 0 {
            return Err(Error::invalid(
                "similarity config",
                "pairs_per_cell must be >= 1",
            ));
        }
        Ok(())
    }
}

/// C×C matrix of averaged inter-class cosine similarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    values: Vec<f64>,
    class_names: Vec<String>,
}

impl SimilarityMatrix {
    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.num_classes() + b]
    }

    /// CSV with class-name header row and column, entries to 2 decimals.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for name in &self.class_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for a in 0..self.num_classes() {
            out.push_str(&self.class_names[a]);
            for b in 0..self.num_classes() {
                out.push_str(&format!(",{:.2}", self.get(a, b)));
            }
            out.push('\n');
        }
        out
    }
}

/// Cosine of the angle between two vectors, clamped to [-1, 1] against
/// rounding. Errors on zero-norm input.
pub fn cosine(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "cosine operands".into(),
            expected: x.len(),
            found: y.len(),
        });
    }
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroNormFeature {
            sample_id: "<unnamed>".into(),
        });
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok((dot / (nx * ny)).clamp(-1.0, 1.0))
}

/// Selects `n` sample indices from `pool`: a seeded partial shuffle without
/// replacement when the pool is large enough, otherwise draws with
/// replacement.
fn draw_indices<R: Rng>(pool: &[usize], n: usize, rng: &mut R) -> Vec<usize> {
    if pool.len() >= n {
        let mut shuffled = pool.to_vec();
        let (chosen, _) = shuffled.partial_shuffle(rng, n);
        chosen.to_vec()
    } else {
        (0..n)
            .map(|_| pool[rng.random_range(0..pool.len())])
            .collect()
    }
}

fn feature_of(model: &Model, ds: &LabeledDataset, index: usize) -> Result<Vec<f64>> {
    let (_, features) = model.forward(ds.samples()[index].input.as_slice())?;
    if features.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroNormFeature {
            sample_id: ds.ids()[index].clone(),
        });
    }
    Ok(features)
}

/// Mean cosine similarity between two classes over `pairs_per_cell` seeded
/// pairs. The pair (a, b) is canonicalized to (min, max) so both orders give
/// the identical value; the draw stream depends only on the config seed and
/// the canonical pair.
pub fn class_pair_similarity(
    model: &Model,
    ds: &LabeledDataset,
    a: usize,
    b: usize,
    cfg: &SimilarityConfig,
) -> Result<f64> {
    cfg.validate()?;
    let c = ds.num_classes();
    if a >= c || b >= c {
        return Err(Error::LabelOutOfRange {
            label: a.max(b),
            num_classes: c,
        });
    }
    if a == b {
        return Err(Error::invalid("class pair", "classes must differ"));
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let pool_lo = ds.class_indices(lo);
    let pool_hi = ds.class_indices(hi);
    for (class, pool) in [(lo, &pool_lo), (hi, &pool_hi)] {
        if pool.is_empty() {
            return Err(Error::EmptyClass {
                name: ds.class_names()[class].clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, (lo * c + hi) as u64));
    let picks_lo = draw_indices(&pool_lo, cfg.pairs_per_cell, &mut rng);
    let picks_hi = draw_indices(&pool_hi, cfg.pairs_per_cell, &mut rng);
    let mut sum = 0.0;
    for (&i, &j) in picks_lo.iter().zip(&picks_hi) {
        let fx = feature_of(model, ds, i)?;
        let fy = feature_of(model, ds, j)?;
        sum += cosine(&fx, &fy)?;
    }
    Ok(sum / cfg.pairs_per_cell as f64)
}

/// Full inter-class similarity matrix: symmetric, diagonal exactly 1.
pub fn similarity_matrix(
    model: &Model,
    ds: &LabeledDataset,
    cfg: &SimilarityConfig,
) -> Result<SimilarityMatrix> {
    cfg.validate()?;
    if model.arch().hidden_dim == 0 {
        log::warn!(
            "similarity features come from the raw input: the model has no hidden layer to tap"
        );
    }
    let c = ds.num_classes();
    let mut values = vec![0.0; c * c];
    for a in 0..c {
        values[a * c + a] = 1.0;
        for b in (a + 1)..c {
            let v = class_pair_similarity(model, ds, a, b, cfg)?;
            values[a * c + b] = v;
            values[b * c + a] = v;
        }
    }
    Ok(SimilarityMatrix {
        values,
        class_names: ds.class_names().to_vec(),
    })
}
