//! Seeded synthetic datasets: Gaussian blobs with configurable per-class
//! counts, so imbalance experiments run with zero downloads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::{Input, LabeledDataset, Sample};
use crate::error::{Error, Result};

/// Gaussian-blob generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobsSpec {
    /// Samples per class; the vector length is the class count.
    pub counts: Vec<usize>,
    /// Feature dimension.
    pub dim: usize,
    /// Distance scale of class means from the origin. Unused when `centers`
    /// is given.
    pub separation: f64,
    /// Isotropic per-class noise standard deviation.
    pub noise_std: f64,
    pub seed: u64,
    /// Explicit class means; when absent, means are placed at `separation`
    /// along seeded random unit directions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<Vec<f64>>>,
}

impl BlobsSpec {
    pub fn validate(&self) -> Result<()> {
        if self.counts.len() < 2 {
            return Err(Error::TooFewClasses {
                found: self.counts.len(),
            });
        }
        if self.counts.contains(&0) {
            return Err(Error::invalid("blob spec", "every class needs >= 1 sample"));
        }
        if self.dim == 0 {
            return Err(Error::invalid("blob spec", "dim must be positive"));
        }
        if !(self.separation.is_finite() && self.separation >= 0.0) {
            return Err(Error::invalid("blob spec", "separation must be >= 0"));
        }
        if !(self.noise_std.is_finite() && self.noise_std > 0.0) {
            return Err(Error::invalid("blob spec", "noise_std must be positive"));
        }
        if let Some(centers) = &self.centers {
            if centers.len() != self.counts.len() {
                return Err(Error::DimensionMismatch {
                    what: "blob centers".into(),
                    expected: self.counts.len(),
                    found: centers.len(),
                });
            }
            for c in centers {
                if c.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        what: "blob center".into(),
                        expected: self.dim,
                        found: c.len(),
                    });
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        what: "blob center".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The bundled 5-class imbalance benchmark: counts [500, 400, 300, 50, 20]
/// with well-separated majority blobs and the smallest class placed next to
/// the largest one, so unweighted training starves it while re-weighted
/// training recovers it.
pub fn imbalance_benchmark_blobs() -> BlobsSpec {
    BlobsSpec {
        counts: vec![500, 400, 300, 50, 20],
        dim: 2,
        separation: 0.0,
        noise_std: 1.0,
        seed: 0,
        centers: Some(vec![
            vec![0.0, 0.0],
            vec![8.0, 0.0],
            vec![0.0, 8.0],
            vec![8.0, 8.0],
            vec![3.0, 0.0],
        ]),
    }
}

fn unit_direction<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Deterministic Gaussian blobs: class means at the explicit `centers`, or
/// at `separation` along seeded random unit directions; samples at
/// `mean + noise_std * z` with standard normal `z`. Class names are
/// zero-padded (`class_00`, ...) so lexicographic order matches class index
/// order.
pub fn gaussian_blobs(spec: &BlobsSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let c = spec.counts.len();
    let width = (c - 1).to_string().len();
    let class_names: Vec<String> = (0..c).map(|i| format!("class_{i:0width$}")).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let means: Vec<Vec<f64>> = match &spec.centers {
        Some(centers) => centers.clone(),
        None => (0..c)
            .map(|_| {
                unit_direction(spec.dim, &mut rng)
                    .into_iter()
                    .map(|x| x * spec.separation)
                    .collect()
            })
            .collect(),
    };

    let mut samples = Vec::with_capacity(spec.counts.iter().sum());
    for (label, &n) in spec.counts.iter().enumerate() {
        for _ in 0..n {
            let point: Vec<f64> = means[label]
                .iter()
                .map(|&m| m + spec.noise_std * rng.sample::<f64, _>(StandardNormal))
                .collect();
            samples.push(Sample {
                input: Input::Features(point),
                label,
            });
        }
    }
    LabeledDataset::new(samples, class_names)
}
