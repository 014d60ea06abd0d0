//! Desk-scale toolkit for multiclass classification under class imbalance.
//!
//! The crate covers the full loop: dataset ingestion with stratified
//! splitting and augmentation ([`dataset`]), weighted/class-balanced/focal
//! losses with analytic gradients ([`losses`]), a small feedforward
//! classifier with a penultimate feature tap ([`model`]), deterministic SGD
//! training and replicated benchmarking ([`trainer`]), confusion-matrix and
//! micro-F1 evaluation ([`metrics`]), inter-class cosine-similarity analysis
//! ([`similarity`]) and seeded synthetic data ([`synth`]).
//!
//! Everything is deterministic given its seed: replications, splits and
//! similarity draws derive independent streams through [`seeding::mix_seed`].

pub mod dataset;
pub mod error;
pub mod losses;
pub mod metrics;
pub mod model;
pub mod seeding;
pub mod similarity;
pub mod synth;
pub mod trainer;

pub use dataset::{
    augment, flip_horizontal, flip_vertical, normalize_dataset, normalize_raster, one_hot,
    rotate_raster, stratified_split, stratified_split_indices, AugmentPolicy, ClassCounts, Input,
    LabeledDataset, OneHot, Raster, Sample, SplitIndices, SplitRatios,
};
pub use error::{Error, Result};
pub use losses::{
    cb_loss, ce_loss, explicit_weights, focal_loss, inverse_proportion_weights, loss_grad_logits,
    softmax, wce_loss, CbParams, ClassWeights, FocalParams, LossKind, LossSpec, Probabilities,
    Reduction, WeightStrategy,
};
pub use metrics::{
    argmax, confusion_matrix, metrics_report, micro_f1, per_class_recall, row_normalize,
    ConfusionMatrix, MetricsReport,
};
pub use model::{init_model, Matrix, Model, ModelArch, ParamSet};
pub use similarity::{
    class_pair_similarity, cosine, similarity_matrix, SimilarityConfig, SimilarityMatrix,
    SubsetChoice,
};
pub use synth::{gaussian_blobs, imbalance_benchmark_blobs, BlobsSpec};
pub use trainer::{
    count_parameters, evaluate, lr_at, predict_labels, replication_seeds, run_benchmark, sgd_step,
    train, train_from, BenchmarkReport, EpochRecord, TrainConfig, TrainHistory,
};
