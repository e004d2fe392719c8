//! Confusion matrices and the scalar metrics derived from predictions.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::classifiers::ClassDistribution;

/// `counts[actual][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.num_classes()).map(|c| self.counts[c][c]).sum()
    }

    /// Fraction on the diagonal; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        ratio(self.correct(), self.total())
    }

    /// Instances whose actual class is `c`.
    pub fn row_sum(&self, c: usize) -> usize {
        self.counts[c].iter().sum()
    }

    /// Instances predicted as `c`.
    pub fn column_sum(&self, c: usize) -> usize {
        self.counts.iter().map(|row| row[c]).sum()
    }

    pub fn supports(&self) -> Vec<usize> {
        (0..self.num_classes()).map(|c| self.row_sum(c)).collect()
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn confusion_matrix(actual: &[usize], predicted: &[usize], k: usize) -> Result<ConfusionMatrix, EvalError> {
    if actual.len() != predicted.len() {
        return Err(EvalError::LengthMismatch { expected: actual.len(), found: predicted.len() });
    }
    let mut counts = vec![vec![0; k]; k];
    for (&a, &p) in actual.iter().zip(predicted) {
        if a >= k || p >= k {
            return Err(EvalError::LabelOutOfRange { label: a.max(p), classes: k });
        }
        counts[a][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

/// `(precision, recall)` of class `c`; each is 0 when its denominator is 0.
pub fn precision_recall(cm: &ConfusionMatrix, c: usize) -> (f64, f64) {
    let hit = cm.counts[c][c];
    (ratio(hit, cm.column_sum(c)), ratio(hit, cm.row_sum(c)))
}

/// `(beta^2 + 1) P R / (beta^2 P + R)`; 0 when the denominator is 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den == 0.0 {
        0.0
    } else {
        (b2 + 1.0) * precision * recall / den
    }
}

pub fn weighted_average(values: &[f64], supports: &[usize]) -> Result<f64, EvalError> {
    if values.len() != supports.len() {
        return Err(EvalError::LengthMismatch { expected: supports.len(), found: values.len() });
    }
    let total: usize = supports.iter().sum();
    if total == 0 {
        return Err(EvalError::ZeroSupport);
    }
    Ok(values.iter().zip(supports).map(|(v, &s)| v * (s as f64 / total as f64)).sum())
}

/// Mean over instances and classes of `|p(c) - [c = actual]|`; 0 for no
/// instances.
pub fn mae(distributions: &[ClassDistribution], actual: &[usize]) -> f64 {
    let mut sum = 0.0;
    let mut cells = 0usize;
    for (d, &y) in distributions.iter().zip(actual) {
        for (c, &p) in d.0.iter().enumerate() {
            let truth = if c == y { 1.0 } else { 0.0 };
            sum += (p - truth).abs();
        }
        cells += d.0.len();
    }
    if cells == 0 {
        0.0
    } else {
        sum / cells as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

fn positives_negatives(actual: &[usize], c: usize) -> (usize, usize) {
    let p = actual.iter().filter(|&&y| y == c).count();
    (p, actual.len() - p)
}

/// One-vs-rest ROC of class `c` from per-instance scores: the threshold
/// sweeps the distinct scores in descending order, so tied scores form a
/// single diagonal step.
pub fn roc_curve(scores: &[f64], actual: &[usize], c: usize) -> Result<Vec<RocPoint>, EvalError> {
    if scores.len() != actual.len() {
        return Err(EvalError::LengthMismatch { expected: actual.len(), found: scores.len() });
    }
    let (pos, neg) = positives_negatives(actual, c);
    if pos == 0 || neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if actual[order[i]] == c {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint { fpr: fp as f64 / neg as f64, tpr: tp as f64 / pos as f64 });
    }
    Ok(points)
}

/// Trapezoidal area under [`roc_curve`].
pub fn auc(scores: &[f64], actual: &[usize], c: usize) -> Result<f64, EvalError> {
    let points = roc_curve(scores, actual, c)?;
    Ok(points.windows(2).map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0).sum())
}
