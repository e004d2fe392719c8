//! Gaussian naive Bayes over numeric attributes.
//!
//! Each class keeps a Laplace-smoothed prior `(n_c + 1) / (N + K)` and, per
//! attribute, the mean and population variance of its training values
//! (variance floored at [`VARIANCE_FLOOR`]). Sparse inputs are scored as
//! `sum_j log N(0) + sum_{x_j != 0} [log N(x_j) - log N(0)]` so a prediction
//! only touches the non-zero entries.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{reject_missing, ClassDistribution, ClassifierError};
use crate::data::{NumericDataset, SparseVector};

pub const VARIANCE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassGaussians {
    pub log_prior: f64,
    /// `None` for classes without training instances; their attribute
    /// densities are treated as uniform.
    pub moments: Option<Moments>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    /// Log-density of the all-zero vector.
    pub zero_log_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub classes: Vec<ClassGaussians>,
}

fn log_density(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * PI * var).ln() - (x - mean) * (x - mean) / (2.0 * var)
}

pub fn train_naive_bayes(data: &NumericDataset) -> Result<NaiveBayesModel, ClassifierError> {
    reject_missing(data, "naive Bayes")?;
    let k = data.num_classes();
    let d = data.num_features();
    let counts = data.class_counts();
    let mut sums = vec![vec![0.0; d]; k];
    for (row, &y) in data.rows.iter().zip(&data.labels) {
        for (j, x) in row.iter() {
            sums[y][j] += x;
        }
    }
    let means: Vec<Vec<f64>> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &n)| s.iter().map(|v| if n > 0 { v / n as f64 } else { 0.0 }).collect())
        .collect();
    // Squared deviations: zeros contribute mean^2 each, so start from that and
    // correct the non-zero entries.
    let mut sq = vec![vec![0.0; d]; k];
    for c in 0..k {
        for j in 0..d {
            sq[c][j] = counts[c] as f64 * means[c][j] * means[c][j];
        }
    }
    for (row, &y) in data.rows.iter().zip(&data.labels) {
        for (j, x) in row.iter() {
            let m = means[y][j];
            sq[y][j] += (x - m) * (x - m) - m * m;
        }
    }

    let n = data.len() as f64;
    let classes = (0..k)
        .map(|c| {
            let log_prior = ((counts[c] as f64 + 1.0) / (n + k as f64)).ln();
            let moments = (counts[c] > 0).then(|| {
                let variances: Vec<f64> = sq[c]
                    .iter()
                    .map(|s| (s / counts[c] as f64).max(VARIANCE_FLOOR))
                    .collect();
                let zero_log_density = means[c]
                    .iter()
                    .zip(&variances)
                    .map(|(&m, &v)| log_density(0.0, m, v))
                    .sum();
                Moments { means: means[c].clone(), variances, zero_log_density }
            });
            ClassGaussians { log_prior, moments }
        })
        .collect();
    Ok(NaiveBayesModel { classes })
}

impl NaiveBayesModel {
    pub fn log_scores(&self, x: &SparseVector) -> Vec<f64> {
        self.classes
            .iter()
            .map(|c| match &c.moments {
                None => c.log_prior,
                Some(m) => {
                    let mut s = c.log_prior + m.zero_log_density;
                    for (j, v) in x.iter() {
                        if j >= m.means.len() || v.is_nan() {
                            continue;
                        }
                        let (mean, var) = (m.means[j], m.variances[j]);
                        s += log_density(v, mean, var) - log_density(0.0, mean, var);
                    }
                    s
                }
            })
            .collect()
    }

    pub fn distribution(&self, x: &SparseVector) -> ClassDistribution {
        ClassDistribution::from_log_scores(&self.log_scores(x))
    }
}
