use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{auc, confusion_matrix, f_beta, mae, precision_recall, weighted_average, ConfusionMatrix};
use super::EvalError;
use crate::classifiers::ClassDistribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Protocol {
    Resubstitution,
    CrossValidation { folds: usize, seed: u64 },
    PercentageSplit { train_percent: f64, seed: u64 },
    Holdout,
}

impl Protocol {
    pub fn describe(&self) -> String {
        match self {
            Protocol::Resubstitution => "evaluation on training data".into(),
            Protocol::CrossValidation { folds, seed } => format!("stratified {folds}-fold cross-validation (seed {seed})"),
            Protocol::PercentageSplit { train_percent, seed } => {
                format!("{train_percent}% train / {}% test split (seed {seed})", 100.0 - train_percent)
            }
            Protocol::Holdout => "separate test set".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the evaluated instances are all, or none, of this class.
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Support-weighted over the classes whose AUC is defined.
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub protocol: Protocol,
    pub total: usize,
    pub correct: usize,
    pub incorrect: usize,
    pub accuracy: f64,
    pub mae: f64,
    pub per_class: Vec<ClassMetrics>,
    pub weighted_avg: WeightedMetrics,
    pub confusion: ConfusionMatrix,
}

impl EvaluationReport {
    /// Assembles every metric from per-instance distributions. The predicted
    /// class is the distribution's argmax; class `c`'s ROC score is `p(c)`.
    pub fn from_predictions(
        protocol: Protocol,
        class_labels: &[String],
        actual: &[usize],
        distributions: &[ClassDistribution],
    ) -> Result<Self, EvalError> {
        if actual.is_empty() {
            return Err(EvalError::NoInstances);
        }
        if actual.len() != distributions.len() {
            return Err(EvalError::LengthMismatch { expected: actual.len(), found: distributions.len() });
        }
        let k = class_labels.len();
        let predicted: Vec<usize> = distributions.iter().map(ClassDistribution::argmax).collect();
        let confusion = confusion_matrix(actual, &predicted, k)?;
        let supports = confusion.supports();
        let per_class: Vec<ClassMetrics> = (0..k)
            .map(|c| {
                let (precision, recall) = precision_recall(&confusion, c);
                let scores: Vec<f64> = distributions.iter().map(|d| d.0.get(c).copied().unwrap_or(0.0)).collect();
                ClassMetrics {
                    label: class_labels[c].clone(),
                    support: supports[c],
                    precision,
                    recall,
                    f1: f_beta(precision, recall, 1.0),
                    auc: auc(&scores, actual, c).ok(),
                }
            })
            .collect();
        let column = |f: fn(&ClassMetrics) -> f64| -> Result<f64, EvalError> {
            weighted_average(&per_class.iter().map(f).collect::<Vec<_>>(), &supports)
        };
        let (auc_values, auc_supports): (Vec<f64>, Vec<usize>) =
            per_class.iter().filter_map(|m| m.auc.map(|a| (a, m.support))).unzip();
        let weighted_avg = WeightedMetrics {
            precision: column(|m| m.precision)?,
            recall: column(|m| m.recall)?,
            f1: column(|m| m.f1)?,
            auc: weighted_average(&auc_values, &auc_supports).ok(),
        };
        let correct = confusion.correct();
        Ok(Self {
            protocol,
            total: actual.len(),
            correct,
            incorrect: actual.len() - correct,
            accuracy: confusion.accuracy(),
            mae: mae(distributions, actual),
            per_class,
            weighted_avg,
            confusion,
        })
    }

    pub fn class_labels(&self) -> Vec<&str> {
        self.per_class.iter().map(|m| m.label.as_str()).collect()
    }

    /// Plain-text summary, per-class table and confusion matrix. Values are
    /// rounded to four decimals here only.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pct = |n: usize| 100.0 * n as f64 / self.total as f64;
        let _ = writeln!(out, "=== Summary ({}) ===", self.protocol.describe());
        let _ = writeln!(out, "{:<34}{:>8}{:>12.4} %", "Correctly Classified Instances", self.correct, pct(self.correct));
        let _ = writeln!(out, "{:<34}{:>8}{:>12.4} %", "Incorrectly Classified Instances", self.incorrect, pct(self.incorrect));
        let _ = writeln!(out, "{:<34}{:>8}", "Total Number of Instances", self.total);
        let _ = writeln!(out, "{:<34}{:>8.4}", "Mean absolute error", self.mae);
        let _ = writeln!(out);
        let _ = writeln!(out, "=== Detailed Accuracy By Class ===");
        let width = self.per_class.iter().map(|m| m.label.len()).max().unwrap_or(0).max(13);
        let _ = writeln!(out, "{:<width$}{:>11}{:>11}{:>11}{:>11}", "Class", "Precision", "Recall", "F-Measure", "ROC Area");
        let auc_cell = |a: Option<f64>| a.map_or("?".to_string(), |v| format!("{v:.4}"));
        for m in &self.per_class {
            let _ = writeln!(
                out,
                "{:<width$}{:>11.4}{:>11.4}{:>11.4}{:>11}",
                m.label,
                m.precision,
                m.recall,
                m.f1,
                auc_cell(m.auc)
            );
        }
        let w = &self.weighted_avg;
        let _ = writeln!(
            out,
            "{:<width$}{:>11.4}{:>11.4}{:>11.4}{:>11}",
            "Weighted Avg.",
            w.precision,
            w.recall,
            w.f1,
            auc_cell(w.auc)
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "=== Confusion Matrix (rows: actual) ===");
        let cell = self.confusion.counts.iter().flatten().map(|c| c.to_string().len()).max().unwrap_or(1).max(4) + 1;
        for m in &self.per_class {
            let _ = write!(out, "{:>cell$}", m.label.chars().take(cell - 1).collect::<String>());
        }
        let _ = writeln!(out, "   <-- predicted");
        for (row, m) in self.confusion.counts.iter().zip(&self.per_class) {
            for c in row {
                let _ = write!(out, "{c:>cell$}");
            }
            let _ = writeln!(out, "   | {}", m.label);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
