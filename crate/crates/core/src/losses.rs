//! Softmax probabilities, the four classification losses with analytic
//! gradients with respect to logits, and class-weight derivation.
//!
//! All four losses scale the cross entropy `-log p_true` by a factor:
//!
//! - CE:  factor 1
//! - WCE: factor `w_true` (per-class weight)
//! - CB:  factor `(1 - beta) / (1 - beta^n)` with `n` the true class's count
//! - FL:  factor `(1 - p_true)^gamma` (modulating factor)
//!
//! Each reduces exactly to CE at its neutral parameter (w ≡ 1, beta = 0,
//! gamma = 0).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassCounts, OneHot};
use crate::error::{Error, Result};

/// Floor applied to probabilities inside `log` so degenerate inputs produce
/// large finite losses instead of infinities.
pub const PROB_FLOOR: f64 = 1e-12;

/// A softmax output: entries in [0, 1] summing to 1 within 1e-9.
///
/// Mathematically every entry is positive; extreme logits can underflow an
/// entry to exactly 0, which the loss functions absorb via [`PROB_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct Probabilities {
    p: Vec<f64>,
}

impl Probabilities {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Empty {
                what: "probability vector".into(),
            });
        }
        let mut sum = 0.0;
        for &v in &p {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(
                    "probability vector",
                    format!("entry {v} outside [0, 1]"),
                ));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "probability vector",
                format!("sums to {sum}, expected 1"),
            ));
        }
        Ok(Probabilities { p })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }
}

/// Max-shifted softmax: `p_i = exp(z_i - m) / sum_j exp(z_j - m)` with
/// `m = max(z)`, so arbitrarily large logits never overflow.
pub fn softmax(logits: &[f64]) -> Result<Probabilities> {
    if logits.is_empty() {
        return Err(Error::Empty {
            what: "logits".into(),
        });
    }
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "logits".into(),
        });
    }
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    Probabilities::new(exps.into_iter().map(|e| e / sum).collect())
}

/// How a weight vector was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightStrategy {
    Uniform,
    InverseProportion,
    Explicit,
}

/// Per-class positive loss weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    values: Vec<f64>,
    strategy: WeightStrategy,
}

impl ClassWeights {
    /// All-ones weights; equivalent to plain CE under [`wce_loss`].
    pub fn uniform(num_classes: usize) -> Self {
        ClassWeights {
            values: vec![1.0; num_classes],
            strategy: WeightStrategy::Uniform,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn strategy(&self) -> WeightStrategy {
        self.strategy
    }

    pub fn get(&self, class: usize) -> f64 {
        self.values[class]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Inverse-proportion weighting: `w_i = n_max / n_i`. The majority class
/// gets weight 1; rarer classes get strictly larger weights.
pub fn inverse_proportion_weights(counts: &ClassCounts) -> ClassWeights {
    let n_max = counts.n_max() as f64;
    ClassWeights {
        values: counts.counts().iter().map(|&n| n_max / n as f64).collect(),
        strategy: WeightStrategy::InverseProportion,
    }
}

/// Weights taken verbatim, e.g. hand-tuned tables. All entries must be
/// strictly positive.
pub fn explicit_weights(values: Vec<f64>) -> Result<ClassWeights> {
    if values.is_empty() {
        return Err(Error::Empty {
            what: "weight vector".into(),
        });
    }
    if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::invalid(
            "class weights",
            format!("non-positive entry {bad}"),
        ));
    }
    Ok(ClassWeights {
        values,
        strategy: WeightStrategy::Explicit,
    })
}

/// Class-balanced loss parameters: `beta` in [0, 1) and per-class sample
/// counts supplying the exponent `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbParams {
    beta: f64,
    per_class_n: Vec<usize>,
}

impl CbParams {
    pub fn new(beta: f64, counts: &ClassCounts) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::invalid("beta", format!("{beta} outside [0, 1)")));
        }
        Ok(CbParams {
            beta,
            per_class_n: counts.counts().to_vec(),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn per_class_n(&self) -> &[usize] {
        &self.per_class_n
    }

    /// `(1 - beta) / (1 - beta^n)` for the given class.
    pub fn coefficient(&self, class: usize) -> f64 {
        let n = self.per_class_n[class];
        if self.beta == 0.0 {
            return 1.0;
        }
        let n_i32 = i32::try_from(n).unwrap_or(i32::MAX);
        (1.0 - self.beta) / (1.0 - self.beta.powi(n_i32))
    }
}

/// Focal loss parameter: the focusing exponent `gamma >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocalParams {
    gamma: f64,
}

impl FocalParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid("gamma", format!("{gamma} must be >= 0")));
        }
        Ok(FocalParams { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Batch reduction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    #[default]
    Mean,
    Sum,
}

/// Loss family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossKind {
    #[serde(rename = "ce")]
    CrossEntropy,
    #[serde(rename = "wce")]
    WeightedCrossEntropy,
    #[serde(rename = "cb")]
    ClassBalanced,
    #[serde(rename = "focal")]
    Focal,
}

/// Which loss to train with, plus its parameters. Parameters must be present
/// exactly when the kind requires them (checked by [`LossSpec::validate`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    pub kind: LossKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<ClassWeights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cb: Option<CbParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal: Option<FocalParams>,
    #[serde(default)]
    pub reduction: Reduction,
}

impl LossSpec {
    pub fn ce() -> Self {
        LossSpec {
            kind: LossKind::CrossEntropy,
            weights: None,
            cb: None,
            focal: None,
            reduction: Reduction::Mean,
        }
    }

    pub fn wce(weights: ClassWeights) -> Self {
        LossSpec {
            kind: LossKind::WeightedCrossEntropy,
            weights: Some(weights),
            cb: None,
            focal: None,
            reduction: Reduction::Mean,
        }
    }

    pub fn class_balanced(params: CbParams) -> Self {
        LossSpec {
            kind: LossKind::ClassBalanced,
            weights: None,
            cb: Some(params),
            focal: None,
            reduction: Reduction::Mean,
        }
    }

    pub fn focal(params: FocalParams) -> Self {
        LossSpec {
            kind: LossKind::Focal,
            weights: None,
            cb: None,
            focal: Some(params),
            reduction: Reduction::Mean,
        }
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    /// Checks that exactly the parameters required by `kind` are present and
    /// sized for `num_classes`.
    pub fn validate(&self, num_classes: usize) -> Result<()> {
        let expect = |present: bool, name: &str, required: bool| -> Result<()> {
            if present != required {
                let state = if required { "missing" } else { "unexpected" };
                return Err(Error::invalid("loss spec", format!("{state} {name}")));
            }
            Ok(())
        };
        match self.kind {
            LossKind::CrossEntropy => {
                expect(self.weights.is_some(), "weights", false)?;
                expect(self.cb.is_some(), "cb params", false)?;
                expect(self.focal.is_some(), "focal params", false)?;
            }
            LossKind::WeightedCrossEntropy => {
                expect(self.weights.is_some(), "weights", true)?;
                expect(self.cb.is_some(), "cb params", false)?;
                expect(self.focal.is_some(), "focal params", false)?;
                let w = self.weights.as_ref().unwrap();
                if w.len() != num_classes {
                    return Err(Error::DimensionMismatch {
                        what: "class weights".into(),
                        expected: num_classes,
                        found: w.len(),
                    });
                }
            }
            LossKind::ClassBalanced => {
                expect(self.weights.is_some(), "weights", false)?;
                expect(self.cb.is_some(), "cb params", true)?;
                expect(self.focal.is_some(), "focal params", false)?;
                let cb = self.cb.as_ref().unwrap();
                if cb.per_class_n.len() != num_classes {
                    return Err(Error::DimensionMismatch {
                        what: "per-class counts".into(),
                        expected: num_classes,
                        found: cb.per_class_n.len(),
                    });
                }
            }
            LossKind::Focal => {
                expect(self.weights.is_some(), "weights", false)?;
                expect(self.cb.is_some(), "cb params", false)?;
                expect(self.focal.is_some(), "focal params", true)?;
            }
        }
        Ok(())
    }

    /// Per-sample loss value.
    pub fn loss(&self, p: &Probabilities, t: OneHot) -> f64 {
        match self.kind {
            LossKind::CrossEntropy => ce_loss(p, t),
            LossKind::WeightedCrossEntropy => {
                wce_loss(p, t, self.weights.as_ref().expect("validated spec"))
            }
            LossKind::ClassBalanced => cb_loss(p, t, self.cb.as_ref().expect("validated spec")),
            LossKind::Focal => focal_loss(p, t, self.focal.as_ref().expect("validated spec")),
        }
    }

    /// Per-sample gradient of the loss with respect to logits. See
    /// [`loss_grad_logits`].
    pub fn grad_logits(&self, logits: &[f64], t: OneHot) -> Result<Vec<f64>> {
        loss_grad_logits(self, logits, t)
    }
}

#[inline]
fn clamped_neg_log(p_true: f64) -> f64 {
    -(p_true.max(PROB_FLOOR)).ln()
}

/// Cross entropy `-log p_true` (floored via [`PROB_FLOOR`], never infinite).
pub fn ce_loss(p: &Probabilities, t: OneHot) -> f64 {
    assert_eq!(
        p.len(),
        t.num_classes(),
        "probability/target length mismatch"
    );
    clamped_neg_log(p.get(t.class()))
}

/// Weighted cross entropy: `w_true * ce_loss`.
pub fn wce_loss(p: &Probabilities, t: OneHot, weights: &ClassWeights) -> f64 {
    assert_eq!(weights.len(), t.num_classes(), "weight length mismatch");
    weights.get(t.class()) * ce_loss(p, t)
}

/// Class-balanced loss: `(1 - beta) / (1 - beta^n) * ce_loss`, with `n` the
/// true class's sample count.
pub fn cb_loss(p: &Probabilities, t: OneHot, params: &CbParams) -> f64 {
    assert_eq!(
        params.per_class_n.len(),
        t.num_classes(),
        "per-class count length mismatch"
    );
    params.coefficient(t.class()) * ce_loss(p, t)
}

/// Focal loss: `(1 - p_true)^gamma * ce_loss`.
pub fn focal_loss(p: &Probabilities, t: OneHot, params: &FocalParams) -> f64 {
    let p_true = p.get(t.class());
    (1.0 - p_true).powf(params.gamma) * ce_loss(p, t)
}

/// Exact analytic gradient of the scalar loss with respect to logits.
///
/// Writing `p = softmax(z)` and `q = p_true`:
/// - CE:  `p - t`
/// - WCE: `w_true * (p - t)`
/// - CB:  `(1 - beta)/(1 - beta^n) * (p - t)`
/// - FL:  `A * (p - t)` with
///   `A = (1-q)^gamma - gamma * q * (1-q)^(gamma-1) * ln(q)`,
///   which degenerates to the CE gradient at `gamma = 0`.
pub fn loss_grad_logits(spec: &LossSpec, logits: &[f64], t: OneHot) -> Result<Vec<f64>> {
    spec.validate(t.num_classes())?;
    if logits.len() != t.num_classes() {
        return Err(Error::DimensionMismatch {
            what: "logits".into(),
            expected: t.num_classes(),
            found: logits.len(),
        });
    }
    let p = softmax(logits)?;
    let scale = match spec.kind {
        LossKind::CrossEntropy => 1.0,
        LossKind::WeightedCrossEntropy => spec.weights.as_ref().expect("validated").get(t.class()),
        LossKind::ClassBalanced => spec.cb.as_ref().expect("validated").coefficient(t.class()),
        LossKind::Focal => {
            let gamma = spec.focal.as_ref().expect("validated").gamma();
            let q = p.get(t.class());
            let one_minus_q = 1.0 - q;
            if gamma == 0.0 {
                1.0
            } else if one_minus_q <= 0.0 {
                // Perfect prediction: loss and gradient both vanish.
                0.0
            } else {
                one_minus_q.powf(gamma)
                    - gamma * q * one_minus_q.powf(gamma - 1.0) * q.max(PROB_FLOOR).ln()
            }
        }
    };
    Ok(p.as_slice()
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            let tj = if j == t.class() { 1.0 } else { 0.0 };
            scale * (pj - tj)
        })
        .collect())
}

/// Renders a `class_name,weight` CSV.
pub fn weights_to_csv_string(class_names: &[String], weights: &ClassWeights) -> String {
    let mut out = String::from("class_name,weight\n");
    for (name, w) in class_names.iter().zip(weights.values()) {
        out.push_str(&format!("{name},{w}\n"));
    }
    out
}

/// Reads a `class_name,weight` CSV into names and explicit weights.
pub fn read_weights_csv(path: &Path) -> Result<(Vec<String>, ClassWeights)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::parse(path, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, e.to_string()))?;
    if headers.get(0) != Some("class_name") || headers.get(1) != Some("weight") {
        return Err(Error::parse(path, "expected header `class_name,weight`"));
    }
    let mut names = Vec::new();
    let mut values = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e.to_string()))?;
        names.push(record.get(0).unwrap_or_default().to_string());
        let w: f64 = record
            .get(1)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, format!("row {}: bad weight", row_idx + 1)))?;
        values.push(w);
    }
    Ok((names, explicit_weights(values)?))
}
