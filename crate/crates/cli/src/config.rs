//! Run configuration: one JSON file mirroring the training-config field
//! names, with CLI flag overrides taking precedence (flag > file > default).

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use classbench::dataset::{AugmentPolicy, LabeledDataset, SplitRatios};
use classbench::losses::{
    explicit_weights, inverse_proportion_weights, read_weights_csv, CbParams, FocalParams, LossSpec,
};
use classbench::model::ModelArch;
use classbench::trainer::TrainConfig;

use crate::commands::usage;

/// Loss selection as written in config files. Weight vectors and per-class
/// counts that depend on the dataset are resolved against it at run time.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossConfig {
    #[default]
    Ce,
    Wce {
        /// Explicit per-class weights; omit to derive inverse-proportion
        /// weights from the dataset counts.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        /// `class_name,weight` CSV supplying explicit weights.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights_csv: Option<PathBuf>,
    },
    Cb {
        beta: f64,
    },
    Focal {
        gamma: f64,
    },
}

impl LossConfig {
    pub fn resolve(&self, ds: &LabeledDataset) -> anyhow::Result<LossSpec> {
        Ok(match self {
            LossConfig::Ce => LossSpec::ce(),
            LossConfig::Wce {
                weights,
                weights_csv,
            } => {
                let w = match (weights, weights_csv) {
                    (Some(values), None) => explicit_weights(values.clone())?,
                    (None, Some(path)) => read_weights_csv(path)?.1,
                    (None, None) => inverse_proportion_weights(ds.counts()),
                    (Some(_), Some(_)) => {
                        return Err(usage(
                            "loss.weights and loss.weights_csv are mutually exclusive",
                        ))
                    }
                };
                if w.len() != ds.num_classes() {
                    return Err(usage(format!(
                        "loss weights have {} entries but the dataset has {} classes",
                        w.len(),
                        ds.num_classes()
                    )));
                }
                LossSpec::wce(w)
            }
            LossConfig::Cb { beta } => LossSpec::class_balanced(CbParams::new(*beta, ds.counts())?),
            LossConfig::Focal { gamma } => LossSpec::focal(FocalParams::new(*gamma)?),
        })
    }
}

/// Everything a training or benchmark run needs beyond the dataset path.
/// `input_dim`/`output_dim` come from the dataset itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub base_lr: f64,
    pub momentum: f64,
    pub lr_step_epochs: usize,
    pub lr_factor: f64,
    pub seed: u64,
    pub replications: usize,
    pub loss: LossConfig,
    pub augment: Option<AugmentPolicy>,
    pub hidden_dim: usize,
    pub freeze_body: bool,
    pub ratios: SplitRatios,
    /// Raster intensity source range normalized onto [-1, 1]; ignored for
    /// feature-vector datasets.
    pub source_range: (f64, f64),
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        RunConfig {
            epochs: t.epochs,
            batch_size: t.batch_size,
            base_lr: t.base_lr,
            momentum: t.momentum,
            lr_step_epochs: t.lr_step_epochs,
            lr_factor: t.lr_factor,
            seed: t.seed,
            replications: t.replications,
            loss: LossConfig::Ce,
            augment: None,
            hidden_dim: 0,
            freeze_body: false,
            ratios: SplitRatios::default(),
            source_range: (0.0, 255.0),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
    }

    pub fn arch(&self, ds: &LabeledDataset) -> ModelArch {
        ModelArch {
            input_dim: ds.input_dim(),
            hidden_dim: self.hidden_dim,
            output_dim: ds.num_classes(),
            freeze_body: self.freeze_body,
        }
    }

    pub fn train_config(&self, ds: &LabeledDataset) -> anyhow::Result<TrainConfig> {
        let cfg = TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            base_lr: self.base_lr,
            momentum: self.momentum,
            lr_step_epochs: self.lr_step_epochs,
            lr_factor: self.lr_factor,
            loss: self.loss.resolve(ds)?,
            seed: self.seed,
            augment: self.augment,
            replications: self.replications,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Shared flag overrides for `train` and `benchmark`.
#[derive(Debug, Clone, clap::Args)]
pub struct ConfigOverrides {
    /// JSON config file; omitted fields fall back to defaults
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Base learning rate
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Loss kind: ce | wce | cb | focal
    #[arg(long)]
    pub loss: Option<String>,
    /// Focal focusing exponent (with --loss focal)
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Class-balanced beta (with --loss cb)
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub hidden_dim: Option<usize>,
    #[arg(long)]
    pub freeze_body: bool,
    /// Enable rotation/flip augmentation with the default policy
    #[arg(long)]
    pub augment: bool,
    /// Split ratios as `train,val,test`
    #[arg(long)]
    pub ratios: Option<String>,
    /// Raster source intensity range as `lo,hi`
    #[arg(long)]
    pub source_range: Option<String>,
}

impl ConfigOverrides {
    /// File config (or defaults) with the flags applied on top.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = self.batch_size {
            cfg.batch_size = v;
        }
        if let Some(v) = self.lr {
            cfg.base_lr = v;
        }
        if let Some(v) = self.momentum {
            cfg.momentum = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.replications {
            cfg.replications = v;
        }
        if let Some(kind) = &self.loss {
            cfg.loss = match kind.as_str() {
                "ce" => LossConfig::Ce,
                "wce" => LossConfig::Wce {
                    weights: None,
                    weights_csv: None,
                },
                "cb" => LossConfig::Cb {
                    beta: self.beta.unwrap_or(0.999),
                },
                "focal" => LossConfig::Focal {
                    gamma: self.gamma.unwrap_or(2.0),
                },
                other => return Err(usage(format!("unknown loss kind `{other}`"))),
            };
        } else {
            if let (Some(beta), LossConfig::Cb { beta: b }) = (self.beta, &mut cfg.loss) {
                *b = beta;
            }
            if let (Some(gamma), LossConfig::Focal { gamma: g }) = (self.gamma, &mut cfg.loss) {
                *g = gamma;
            }
        }
        if let Some(v) = self.hidden_dim {
            cfg.hidden_dim = v;
        }
        if self.freeze_body {
            cfg.freeze_body = true;
        }
        if self.augment {
            cfg.augment = Some(AugmentPolicy::default());
        }
        if let Some(spec) = &self.ratios {
            cfg.ratios = crate::commands::parse_ratios(spec)?;
        }
        if let Some(spec) = &self.source_range {
            cfg.source_range = crate::commands::parse_range(spec)?;
        }
        Ok(cfg)
    }
}
