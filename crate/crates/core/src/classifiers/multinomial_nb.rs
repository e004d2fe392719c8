//! Multinomial naive Bayes over token counts.
//!
//! `P(t|c) = (count(t,c) + 1) / (total(c) + V)` and prior
//! `(n_c + 1) / (N + K)`; a document scores `log prior + sum_t f_t log P(t|c)`.

use serde::{Deserialize, Serialize};

use super::{ClassDistribution, ClassifierError};
use crate::data::{NumericDataset, SparseVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNbModel {
    pub log_priors: Vec<f64>,
    /// `log_probs[c][t]`.
    pub log_probs: Vec<Vec<f64>>,
}

pub fn train_multinomial_nb(data: &NumericDataset) -> Result<MultinomialNbModel, ClassifierError> {
    let k = data.num_classes();
    let v = data.num_features();
    let mut counts = vec![vec![0.0; v]; k];
    for (row, &y) in data.rows.iter().zip(&data.labels) {
        for (j, x) in row.iter() {
            if x.is_nan() {
                return Err(ClassifierError::MissingValues("multinomial naive Bayes"));
            }
            if x < 0.0 {
                return Err(ClassifierError::NegativeValue);
            }
            counts[y][j] += x;
        }
    }
    let n = data.len() as f64;
    let class_counts = data.class_counts();
    let log_priors = class_counts
        .iter()
        .map(|&c| ((c as f64 + 1.0) / (n + k as f64)).ln())
        .collect();
    let log_probs = counts
        .iter()
        .map(|row| {
            let denom = (row.iter().sum::<f64>() + v as f64).ln();
            row.iter().map(|&c| (c + 1.0).ln() - denom).collect()
        })
        .collect();
    Ok(MultinomialNbModel { log_priors, log_probs })
}

impl MultinomialNbModel {
    pub fn log_scores(&self, x: &SparseVector) -> Vec<f64> {
        self.log_priors
            .iter()
            .zip(&self.log_probs)
            .map(|(&prior, probs)| {
                prior
                    + x.iter()
                        .filter(|&(j, f)| j < probs.len() && !f.is_nan())
                        .map(|(j, f)| f * probs[j])
                        .sum::<f64>()
            })
            .collect()
    }

    pub fn distribution(&self, x: &SparseVector) -> ClassDistribution {
        ClassDistribution::from_log_scores(&self.log_scores(x))
    }
}
