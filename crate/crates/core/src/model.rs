//! A small feedforward classifier with a tappable penultimate feature layer:
//! either softmax regression (`hidden_dim = 0`) or one ReLU hidden layer.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Architecture of the classifier head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelArch {
    pub input_dim: usize,
    /// 0 means softmax regression (no hidden layer).
    pub hidden_dim: usize,
    pub output_dim: usize,
    /// When true, the hidden layer is kept fixed and only the output head
    /// trains; gradients for the hidden layer are reported as zero.
    /// Ignored when `hidden_dim` is 0.
    #[serde(default)]
    pub freeze_body: bool,
}

impl ModelArch {
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::invalid("arch", "input_dim must be positive"));
        }
        if self.output_dim < 2 {
            return Err(Error::TooFewClasses {
                found: self.output_dim,
            });
        }
        Ok(())
    }

    /// Dimension of the penultimate feature tap.
    pub fn feature_dim(&self) -> usize {
        if self.hidden_dim == 0 {
            self.input_dim
        } else {
            self.hidden_dim
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix data".into(),
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut f64 {
        &mut self.data[row * self.cols + col]
    }

    /// `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(x).map(|(w, v)| w * v).sum()
            })
            .collect()
    }

    /// `self^T * y`.
    pub fn t_matvec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (row, &yr) in self.data.chunks_exact(self.cols).zip(y) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += w * yr;
            }
        }
        out
    }

    /// `self += scale * (y ⊗ x)`.
    pub fn add_outer_scaled(&mut self, y: &[f64], x: &[f64], scale: f64) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        for (row, &yr) in self.data.chunks_exact_mut(self.cols).zip(y) {
            for (w, v) in row.iter_mut().zip(x) {
                *w += scale * yr * v;
            }
        }
    }
}

/// One tensor per trainable layer. The same shape is used for parameters,
/// gradients and optimizer velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub hidden_w: Option<Matrix>,
    pub hidden_b: Option<Vec<f64>>,
    pub head_w: Matrix,
    pub head_b: Vec<f64>,
}

impl ParamSet {
    pub fn zeros(arch: &ModelArch) -> Self {
        let (hidden_w, hidden_b) = if arch.hidden_dim > 0 {
            (
                Some(Matrix::zeros(arch.hidden_dim, arch.input_dim)),
                Some(vec![0.0; arch.hidden_dim]),
            )
        } else {
            (None, None)
        };
        ParamSet {
            hidden_w,
            hidden_b,
            head_w: Matrix::zeros(arch.output_dim, arch.feature_dim()),
            head_b: vec![0.0; arch.output_dim],
        }
    }

    fn for_each_pair(&mut self, other: &ParamSet, mut f: impl FnMut(&mut f64, f64)) {
        debug_assert_eq!(self.hidden_w.is_some(), other.hidden_w.is_some());
        debug_assert_eq!(self.head_w.data.len(), other.head_w.data.len());
        debug_assert_eq!(self.head_b.len(), other.head_b.len());
        if let (Some(w), Some(ow)) = (self.hidden_w.as_mut(), other.hidden_w.as_ref()) {
            for (a, &b) in w.data.iter_mut().zip(&ow.data) {
                f(a, b);
            }
        }
        if let (Some(b), Some(ob)) = (self.hidden_b.as_mut(), other.hidden_b.as_ref()) {
            for (a, &v) in b.iter_mut().zip(ob) {
                f(a, v);
            }
        }
        for (a, &b) in self.head_w.data.iter_mut().zip(&other.head_w.data) {
            f(a, b);
        }
        for (a, &b) in self.head_b.iter_mut().zip(&other.head_b) {
            f(a, b);
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &ParamSet) {
        self.for_each_pair(other, |s, o| *s += a * o);
    }

    /// `self *= a`.
    pub fn scale(&mut self, a: f64) {
        for v in self.iter_mut() {
            *v *= a;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.hidden_w
            .iter()
            .flat_map(|m| m.data.iter())
            .chain(self.hidden_b.iter().flatten())
            .chain(self.head_w.data.iter())
            .chain(self.head_b.iter())
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.hidden_w
            .iter_mut()
            .flat_map(|m| m.data.iter_mut())
            .chain(self.hidden_b.iter_mut().flatten())
            .chain(self.head_w.data.iter_mut())
            .chain(self.head_b.iter_mut())
    }

    pub fn count(&self) -> usize {
        self.iter().count()
    }

    pub fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// Immutable classifier: parameters plus architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    arch: ModelArch,
    params: ParamSet,
}

/// Initializes a model from a seed: weights uniform in `[-s, s]` with
/// `s = sqrt(6 / (fan_in + fan_out))`, biases zero. Deterministic per seed;
/// hidden weights are drawn row-major first, then head weights.
pub fn init_model(arch: &ModelArch, seed: u64) -> Result<Model> {
    arch.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = ParamSet::zeros(arch);
    let mut fill = |m: &mut Matrix| {
        let s = (6.0 / (m.cols + m.rows) as f64).sqrt();
        for v in m.data.iter_mut() {
            *v = rng.random_range(-s..=s);
        }
    };
    if let Some(w) = params.hidden_w.as_mut() {
        fill(w);
    }
    fill(&mut params.head_w);
    Ok(Model {
        arch: *arch,
        params,
    })
}

/// Checkpoint container; `version` guards the on-disk layout.
#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    arch: ModelArch,
    params: ParamSet,
}

const CHECKPOINT_VERSION: u32 = 1;

impl Model {
    /// Builds a model from explicit parameters, checking shapes and
    /// finiteness.
    pub fn from_params(arch: ModelArch, params: ParamSet) -> Result<Model> {
        arch.validate()?;
        let expect_shape = ParamSet::zeros(&arch);
        let shape_of = |p: &ParamSet| {
            (
                p.hidden_w.as_ref().map(|m| (m.rows, m.cols)),
                p.hidden_b.as_ref().map(|b| b.len()),
                (p.head_w.rows, p.head_w.cols),
                p.head_b.len(),
            )
        };
        if shape_of(&params) != shape_of(&expect_shape) {
            return Err(Error::invalid("model params", "shape does not match arch"));
        }
        if !params.all_finite() {
            return Err(Error::NonFinite {
                what: "model parameters".into(),
            });
        }
        Ok(Model { arch, params })
    }

    pub fn arch(&self) -> &ModelArch {
        &self.arch
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    /// Forward pass on one flattened input. Returns `(logits, features)`
    /// where `features` is the penultimate activation: the ReLU hidden
    /// output, or the raw input when there is no hidden layer.
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if input.len() != self.arch.input_dim {
            return Err(Error::DimensionMismatch {
                what: "model input".into(),
                expected: self.arch.input_dim,
                found: input.len(),
            });
        }
        let features = match (&self.params.hidden_w, &self.params.hidden_b) {
            (Some(w), Some(b)) => {
                let mut h = w.matvec(input);
                for (v, bias) in h.iter_mut().zip(b) {
                    *v = (*v + bias).max(0.0);
                }
                h
            }
            _ => input.to_vec(),
        };
        let mut logits = self.params.head_w.matvec(&features);
        for (v, bias) in logits.iter_mut().zip(&self.params.head_b) {
            *v += bias;
        }
        Ok((logits, features))
    }

    /// Exact parameter gradients for one sample given the gradient of the
    /// loss with respect to logits. With `freeze_body`, hidden-layer
    /// gradients are reported as zero.
    pub fn backward(&self, input: &[f64], grad_logits: &[f64]) -> Result<ParamSet> {
        if grad_logits.len() != self.arch.output_dim {
            return Err(Error::DimensionMismatch {
                what: "grad_logits".into(),
                expected: self.arch.output_dim,
                found: grad_logits.len(),
            });
        }
        let (_, features) = self.forward(input)?;
        let mut grads = ParamSet::zeros(&self.arch);
        grads.head_w.add_outer_scaled(grad_logits, &features, 1.0);
        grads.head_b.copy_from_slice(grad_logits);

        if self.arch.hidden_dim > 0 && !self.arch.freeze_body {
            // d_pre = (W_head^T g) ⊙ relu'(pre); relu output > 0 iff pre > 0.
            let mut d_pre = self.params.head_w.t_matvec(grad_logits);
            for (d, &h) in d_pre.iter_mut().zip(&features) {
                if h <= 0.0 {
                    *d = 0.0;
                }
            }
            grads
                .hidden_w
                .as_mut()
                .expect("hidden layer present")
                .add_outer_scaled(&d_pre, input, 1.0);
            grads
                .hidden_b
                .as_mut()
                .expect("hidden layer present")
                .copy_from_slice(&d_pre);
        }
        Ok(grads)
    }

    /// Total scalar parameters including biases. Counting is structural:
    /// frozen layers still count.
    pub fn parameter_count(&self) -> usize {
        self.params.count()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&Checkpoint {
            version: CHECKPOINT_VERSION,
            arch: self.arch,
            params: self.params.clone(),
        })
        .expect("checkpoint serialization cannot fail")
    }

    pub fn from_json_str(json: &str) -> Result<Model> {
        let ckpt: Checkpoint =
            serde_json::from_str(json).map_err(|e| Error::invalid("checkpoint", e.to_string()))?;
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::invalid(
                "checkpoint",
                format!("unsupported version {}", ckpt.version),
            ));
        }
        Model::from_params(ckpt.arch, ckpt.params)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<Model> {
        let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Model::from_json_str(&json)
    }
}
