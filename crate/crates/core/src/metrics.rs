//! Confusion matrices and micro-averaged precision/recall/F1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// C×C table of true-class rows vs predicted-class columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<u64>,
    class_names: Vec<String>,
}

impl ConfusionMatrix {
    /// Zero matrix with numeric class names `"0"..C`.
    pub fn zeros(num_classes: usize) -> Self {
        let class_names = (0..num_classes).map(|i| i.to_string()).collect();
        ConfusionMatrix {
            counts: vec![0; num_classes * num_classes],
            class_names,
        }
    }

    /// Builds a matrix from row-major counts (rows = true class).
    pub fn from_counts(num_classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != num_classes * num_classes {
            return Err(Error::DimensionMismatch {
                what: "confusion counts".into(),
                expected: num_classes * num_classes,
                found: counts.len(),
            });
        }
        let class_names = (0..num_classes).map(|i| i.to_string()).collect();
        Ok(ConfusionMatrix {
            counts,
            class_names,
        })
    }

    pub fn rename_classes(mut self, class_names: Vec<String>) -> Result<Self> {
        if class_names.len() != self.num_classes() {
            return Err(Error::DimensionMismatch {
                what: "class names".into(),
                expected: self.num_classes(),
                found: class_names.len(),
            });
        }
        self.class_names = class_names;
        Ok(self)
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    #[inline]
    pub fn count(&self, true_class: usize, predicted: usize) -> u64 {
        self.counts[true_class * self.num_classes() + predicted]
    }

    pub fn increment(&mut self, true_class: usize, predicted: usize) {
        let c = self.num_classes();
        self.counts[true_class * c + predicted] += 1;
    }

    pub fn set_count(&mut self, true_class: usize, predicted: usize, count: u64) {
        let c = self.num_classes();
        self.counts[true_class * c + predicted] = count;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes()).map(|i| self.count(i, i)).sum()
    }

    pub fn row_sum(&self, true_class: usize) -> u64 {
        (0..self.num_classes())
            .map(|p| self.count(true_class, p))
            .sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        (0..self.num_classes())
            .map(|t| self.count(t, predicted))
            .sum()
    }

    /// Raw counts as CSV with class-name header row and column.
    pub fn to_counts_csv(&self) -> String {
        let mut out = String::new();
        for name in &self.class_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for t in 0..self.num_classes() {
            out.push_str(&self.class_names[t]);
            for p in 0..self.num_classes() {
                out.push_str(&format!(",{}", self.count(t, p)));
            }
            out.push('\n');
        }
        out
    }

    /// Row-normalized fractions as CSV, rendered to 2 decimals.
    pub fn to_normalized_csv(&self) -> String {
        let rows = row_normalize(self);
        let mut out = String::new();
        for name in &self.class_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (t, row) in rows.iter().enumerate() {
            out.push_str(&self.class_names[t]);
            for v in row {
                out.push_str(&format!(",{v:.2}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Index of the largest value; ties break toward the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Builds the confusion matrix from aligned prediction/label slices.
pub fn confusion_matrix(
    preds: &[usize],
    labels: &[usize],
    num_classes: usize,
) -> Result<ConfusionMatrix> {
    if preds.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            what: "predictions".into(),
            expected: labels.len(),
            found: preds.len(),
        });
    }
    let mut cm = ConfusionMatrix::zeros(num_classes);
    for (&p, &t) in preds.iter().zip(labels) {
        if p >= num_classes {
            return Err(Error::LabelOutOfRange {
                label: p,
                num_classes,
            });
        }
        if t >= num_classes {
            return Err(Error::LabelOutOfRange {
                label: t,
                num_classes,
            });
        }
        cm.increment(t, p);
    }
    Ok(cm)
}

/// Each row divided by its sum; all-zero rows stay zero.
pub fn row_normalize(cm: &ConfusionMatrix) -> Vec<Vec<f64>> {
    (0..cm.num_classes())
        .map(|t| {
            let sum = cm.row_sum(t);
            (0..cm.num_classes())
                .map(|p| {
                    if sum == 0 {
                        0.0
                    } else {
                        cm.count(t, p) as f64 / sum as f64
                    }
                })
                .collect()
        })
        .collect()
}

/// Micro-averaged precision, recall and F1 plus per-class recall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub per_class_recall: Vec<f64>,
}

fn micro_precision_recall_f1(cm: &ConfusionMatrix) -> Result<(f64, f64, f64)> {
    if cm.total() == 0 {
        return Err(Error::Empty {
            what: "confusion matrix".into(),
        });
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fne = 0u64;
    for c in 0..cm.num_classes() {
        let diag = cm.count(c, c);
        tp += diag;
        fp += cm.col_sum(c) - diag;
        fne += cm.row_sum(c) - diag;
    }
    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fne == 0 {
        0.0
    } else {
        tp as f64 / (tp + fne) as f64
    };
    // 2PR/(P+R) reduces to P when P == R; taking that branch keeps the
    // single-label identity micro-F1 == trace/total exact instead of
    // off by one ulp.
    let f1 = if precision + recall == 0.0 {
        0.0
    } else if precision == recall {
        precision
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, f1))
}

/// Micro-averaged F1: aggregate TP/FP/FN over all classes, then
/// `P = TP/(TP+FP)`, `R = TP/(TP+FN)`, `F1 = 2PR/(P+R)`.
pub fn micro_f1(cm: &ConfusionMatrix) -> Result<f64> {
    Ok(micro_precision_recall_f1(cm)?.2)
}

/// Full metrics report; errors on an empty matrix.
pub fn metrics_report(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let (precision, recall, f1) = micro_precision_recall_f1(cm)?;
    Ok(MetricsReport {
        micro_precision: precision,
        micro_recall: recall,
        micro_f1: f1,
        per_class_recall: per_class_recall(cm),
    })
}

/// Diagonal over row sum per class; 0 for empty rows.
pub fn per_class_recall(cm: &ConfusionMatrix) -> Vec<f64> {
    (0..cm.num_classes())
        .map(|c| {
            let sum = cm.row_sum(c);
            if sum == 0 {
                0.0
            } else {
                cm.count(c, c) as f64 / sum as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_predictions() {
        let cm = confusion_matrix(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        assert_eq!(cm.trace(), 3);
        assert_eq!(cm.total(), 3);
        assert_eq!(micro_f1(&cm).unwrap(), 1.0);
        assert_eq!(per_class_recall(&cm), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn all_wrong_predictions() {
        let cm = confusion_matrix(&[1, 1], &[0, 0], 2).unwrap();
        assert_eq!(cm.count(0, 1), 2);
        assert_eq!(micro_f1(&cm).unwrap(), 0.0);
    }

    #[test]
    fn empty_inputs_give_zero_matrix() {
        let cm = confusion_matrix(&[], &[], 3).unwrap();
        assert_eq!(cm.total(), 0);
        assert!(micro_f1(&cm).is_err());
    }

    #[test]
    fn out_of_range_prediction_rejected() {
        assert!(confusion_matrix(&[3], &[0], 3).is_err());
        assert!(confusion_matrix(&[0], &[3], 3).is_err());
    }

    #[test]
    fn row_normalization() {
        let mut cm = ConfusionMatrix::zeros(2);
        for _ in 0..8 {
            cm.increment(0, 0);
        }
        for _ in 0..2 {
            cm.increment(0, 1);
        }
        let rows = row_normalize(&cm);
        assert_eq!(rows[0], vec![0.8, 0.2]);
        assert_eq!(rows[1], vec![0.0, 0.0]);
        assert_eq!(per_class_recall(&cm), vec![0.8, 0.0]);
    }

    #[test]
    fn recall_for_partial_row() {
        let mut cm = ConfusionMatrix::zeros(2);
        cm.increment(0, 0);
        for _ in 0..4 {
            cm.increment(0, 1);
        }
        assert_eq!(per_class_recall(&cm)[0], 0.2);
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax(&[1.0, 1.0, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.9, 0.9]), 1);
        assert_eq!(argmax(&[-3.0]), 0);
    }

    #[test]
    fn micro_f1_equals_accuracy_exhaustively_2x2() {
        // micro-F1 coincides with trace/total for single-label multiclass.
        for a in 0..5u64 {
            for b in 0..5u64 {
                for c in 0..5u64 {
                    for d in 0..5u64 {
                        if a + b + c + d == 0 {
                            continue;
                        }
                        let mut cm = ConfusionMatrix::zeros(2);
                        for (t, p, n) in [(0, 0, a), (0, 1, b), (1, 0, c), (1, 1, d)] {
                            for _ in 0..n {
                                cm.increment(t, p);
                            }
                        }
                        let f1 = micro_f1(&cm).unwrap();
                        let acc = cm.trace() as f64 / cm.total() as f64;
                        assert_eq!(f1, acc);
                    }
                }
            }
        }
    }

    #[test]
    fn metrics_are_permutation_equivariant() {
        let preds = [0, 1, 2, 2, 0, 1, 1];
        let labels = [0, 2, 2, 1, 0, 1, 0];
        let perm = [2usize, 0, 1];
        let cm = confusion_matrix(&preds, &labels, 3).unwrap();
        let preds_p: Vec<usize> = preds.iter().map(|&p| perm[p]).collect();
        let labels_p: Vec<usize> = labels.iter().map(|&t| perm[t]).collect();
        let cm_p = confusion_matrix(&preds_p, &labels_p, 3).unwrap();
        assert_eq!(micro_f1(&cm).unwrap(), micro_f1(&cm_p).unwrap());
        let rec = per_class_recall(&cm);
        let rec_p = per_class_recall(&cm_p);
        for c in 0..3 {
            assert_eq!(rec[c], rec_p[perm[c]]);
        }
    }

    #[test]
    fn from_counts_and_set_count() {
        let mut cm = ConfusionMatrix::from_counts(2, vec![3, 1, 0, 2]).unwrap();
        assert_eq!(cm.count(0, 1), 1);
        assert_eq!(cm.trace(), 5);
        cm.set_count(0, 1, 7);
        assert_eq!(cm.count(0, 1), 7);
        assert!(ConfusionMatrix::from_counts(2, vec![1, 2, 3]).is_err());
    }

    #[test]
    fn csv_rendering_layout() {
        let mut cm = ConfusionMatrix::zeros(2)
            .rename_classes(vec!["oak".into(), "pine".into()])
            .unwrap();
        for _ in 0..4 {
            cm.increment(0, 0);
        }
        cm.increment(0, 1);
        cm.increment(1, 1);
        let counts = cm.to_counts_csv();
        assert!(counts.starts_with(",oak,pine\noak,4,1\npine,0,1\n"));
        let norm = cm.to_normalized_csv();
        assert!(norm.contains("oak,0.80,0.20"));
        assert!(norm.contains("pine,0.00,1.00"));
    }
}
