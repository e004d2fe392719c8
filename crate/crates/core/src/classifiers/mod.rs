//! The seven classifiers and their shared prediction interface.
//!
//! Every trainer consumes a [`NumericDataset`] and produces a [`Model`] whose
//! [`predict_distribution`] returns one probability per class. Ties between
//! classes always go to the lowest class index.

mod columns;
pub mod multinomial_nb;
pub mod naive_bayes;
pub mod rep_tree;
pub mod ripper;
pub mod smo;
pub mod tree;
pub mod zero_r;
pub mod c45;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{NumericDataset, SparseVector};

pub use c45::C45Params;
pub use rep_tree::RepTreeParams;
pub use ripper::RipperParams;
pub use smo::{smo_solve_binary, SmoError, SmoParams};

/// Algorithm choice with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Algorithm {
    ZeroR,
    NaiveBayes,
    NaiveBayesMultinomial,
    Smo(SmoParams),
    C45(C45Params),
    Ripper(RipperParams),
    RepTree(RepTreeParams),
}

impl Algorithm {
    /// Names accepted by [`Algorithm::from_name`], in display order.
    pub const NAMES: [&'static str; 7] =
        ["zero_r", "naive_bayes", "smo", "c45", "ripper", "rep_tree", "naive_bayes_multinomial"];

    /// Algorithm with default hyperparameters. Accepts the snake_case names
    /// and the usual toolkit aliases (`j48`, `jrip`, `reptree`, ...).
    pub fn from_name(name: &str) -> Option<Self> {
        let norm: String =
            name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        Some(match norm.as_str() {
            "zeror" => Algorithm::ZeroR,
            "naivebayes" | "nb" => Algorithm::NaiveBayes,
            "naivebayesmultinomial" | "multinomialnb" | "mnb" => Algorithm::NaiveBayesMultinomial,
            "smo" | "svm" => Algorithm::Smo(SmoParams::default()),
            "c45" | "j48" => Algorithm::C45(C45Params::default()),
            "ripper" | "jrip" => Algorithm::Ripper(RipperParams::default()),
            "reptree" => Algorithm::RepTree(RepTreeParams::default()),
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::ZeroR => "zero_r",
            Algorithm::NaiveBayes => "naive_bayes",
            Algorithm::NaiveBayesMultinomial => "naive_bayes_multinomial",
            Algorithm::Smo(_) => "smo",
            Algorithm::C45(_) => "c45",
            Algorithm::Ripper(_) => "ripper",
            Algorithm::RepTree(_) => "rep_tree",
        }
    }

    /// Display name in the usual toolkit spelling.
    pub fn display_name(&self) -> &'static str {
        match self {
            Algorithm::ZeroR => "ZeroR",
            Algorithm::NaiveBayes => "NaiveBayes",
            Algorithm::NaiveBayesMultinomial => "NaiveBayesMultinomial",
            Algorithm::Smo(_) => "SMO",
            Algorithm::C45(_) => "J48",
            Algorithm::Ripper(_) => "JRip",
            Algorithm::RepTree(_) => "REPTree",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub algorithm: Algorithm,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, seed: 1 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |msg: String| Err(ClassifierError::InvalidHyperparameter(msg));
        match &self.algorithm {
            Algorithm::Smo(p) => {
                if !(p.c > 0.0 && p.c.is_finite()) {
                    return bad(format!("C must be positive, got {}", p.c));
                }
                if p.tolerance.is_nan() || p.tolerance <= 0.0 {
                    return bad(format!("tolerance must be positive, got {}", p.tolerance));
                }
            }
            Algorithm::C45(p) => {
                if !(p.confidence_factor > 0.0 && p.confidence_factor < 1.0) {
                    return bad(format!(
                        "confidence factor must lie in (0, 1), got {}",
                        p.confidence_factor
                    ));
                }
                if p.min_leaf == 0 {
                    return bad("min_leaf must be at least 1".into());
                }
            }
            Algorithm::Ripper(p) => {
                if p.folds < 2 {
                    return bad("ripper folds must be at least 2".into());
                }
            }
            Algorithm::RepTree(p) => {
                if !(p.prune_fraction > 0.0 && p.prune_fraction < 1.0) {
                    return bad(format!("prune fraction must lie in (0, 1), got {}", p.prune_fraction));
                }
                if p.min_leaf == 0 {
                    return bad("min_leaf must be at least 1".into());
                }
            }
            Algorithm::ZeroR | Algorithm::NaiveBayes | Algorithm::NaiveBayesMultinomial => {}
        }
        Ok(())
    }
}

/// One non-negative probability per class, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistribution(pub Vec<f64>);

impl ClassDistribution {
    pub fn uniform(k: usize) -> Self {
        Self(vec![1.0 / k as f64; k])
    }

    /// Normalized counts; uniform if they sum to zero.
    pub fn from_counts<T: Copy + Into<f64>>(counts: &[T]) -> Self {
        let total: f64 = counts.iter().map(|&c| c.into()).sum();
        if total <= 0.0 {
            return Self::uniform(counts.len());
        }
        Self(counts.iter().map(|&c| c.into() / total).collect())
    }

    /// Softmax of log-scores via log-sum-exp.
    pub fn from_log_scores(scores: &[f64]) -> Self {
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Self::uniform(scores.len());
        }
        let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = exp.iter().sum();
        Self(exp.into_iter().map(|e| e / total).collect())
    }

    pub fn point(k: usize, class: usize) -> Self {
        let mut p = vec![0.0; k];
        p[class] = 1.0;
        Self(p)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the largest probability, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

/// Position of the first maximum.
pub(crate) fn argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    ZeroR(zero_r::ZeroRModel),
    NaiveBayes(naive_bayes::NaiveBayesModel),
    NaiveBayesMultinomial(multinomial_nb::MultinomialNbModel),
    Smo(smo::SmoModel),
    C45(tree::TreeModel),
    Ripper(ripper::RipperModel),
    RepTree(tree::TreeModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub spec: ClassifierSpec,
    pub class_labels: Vec<String>,
    pub num_features: usize,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifierError {
    #[error("training data has no instances")]
    NoInstances,
    #[error("class attribute needs at least two declared values, found {0}")]
    TooFewClasses(usize),
    #[error("{0} does not accept missing values")]
    MissingValues(&'static str),
    #[error("multinomial naive Bayes needs non-negative attribute values")]
    NegativeValue,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
    #[error(transparent)]
    Smo(#[from] SmoError),
}

pub(crate) fn reject_missing(data: &NumericDataset, algorithm: &'static str) -> Result<(), ClassifierError> {
    if data.rows.iter().any(SparseVector::has_missing) {
        Err(ClassifierError::MissingValues(algorithm))
    } else {
        Ok(())
    }
}

/// Trains the classifier described by `spec`. Deterministic in `spec.seed`.
pub fn train(spec: &ClassifierSpec, data: &NumericDataset) -> Result<Model, ClassifierError> {
    spec.validate()?;
    if data.is_empty() {
        return Err(ClassifierError::NoInstances);
    }
    if data.num_classes() < 2 {
        return Err(ClassifierError::TooFewClasses(data.num_classes()));
    }
    let payload = match &spec.algorithm {
        Algorithm::ZeroR => Payload::ZeroR(zero_r::train_zero_r(data)),
        Algorithm::NaiveBayes => Payload::NaiveBayes(naive_bayes::train_naive_bayes(data)?),
        Algorithm::NaiveBayesMultinomial => {
            Payload::NaiveBayesMultinomial(multinomial_nb::train_multinomial_nb(data)?)
        }
        Algorithm::Smo(p) => Payload::Smo(smo::train_smo(data, p)?),
        Algorithm::C45(p) => Payload::C45(c45::train_c45(data, p)?),
        Algorithm::Ripper(p) => Payload::Ripper(ripper::train_ripper(data, p, spec.seed)?),
        Algorithm::RepTree(p) => Payload::RepTree(rep_tree::train_rep_tree(data, p, spec.seed)?),
    };
    Ok(Model {
        spec: spec.clone(),
        class_labels: data.class_labels.clone(),
        num_features: data.num_features(),
        payload,
    })
}

/// Per-class probabilities for `x`.
pub fn predict_distribution(model: &Model, x: &SparseVector) -> ClassDistribution {
    let k = model.class_labels.len();
    match &model.payload {
        Payload::ZeroR(m) => m.distribution(),
        Payload::NaiveBayes(m) => m.distribution(x),
        Payload::NaiveBayesMultinomial(m) => m.distribution(x),
        Payload::Smo(m) => m.distribution(x, k),
        Payload::C45(m) | Payload::RepTree(m) => m.distribution(x),
        Payload::Ripper(m) => m.distribution(x, k),
    }
}

/// Most probable class index, lowest index on ties.
pub fn predict_class(model: &Model, x: &SparseVector) -> usize {
    predict_distribution(model, x).argmax()
}

impl Model {
    pub fn predict_distribution(&self, x: &SparseVector) -> ClassDistribution {
        predict_distribution(self, x)
    }

    pub fn predict_class(&self, x: &SparseVector) -> usize {
        predict_class(self, x)
    }

    pub fn predict_label(&self, x: &SparseVector) -> &str {
        &self.class_labels[self.predict_class(x)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(ClassDistribution(vec![0.75, 0.25]).argmax(), 0);
        assert_eq!(ClassDistribution(vec![0.5, 0.5]).argmax(), 0);
        assert_eq!(ClassDistribution(vec![0.2, 0.4, 0.4]).argmax(), 1);
        assert_eq!(argmax(&[3.0 * 0.2, 3.0 * 0.5, 3.0 * 0.3]), 1);
    }

    #[test]
    fn log_scores_survive_extreme_values() {
        let scores = [-1e6, -1e6 - 2f64.ln()];
        let d = ClassDistribution::from_log_scores(&scores);
        let expected = 1.0 / (1.0 + (scores[1] - scores[0]).exp());
        assert!((d.0[0] - expected).abs() < 1e-12);
        assert!((d.0[0] - 2.0 / 3.0).abs() < 1e-9);
        let d = ClassDistribution::from_log_scores(&[1e9, 1e9]);
        assert_eq!(d.0, vec![0.5, 0.5]);
    }

    #[test]
    fn names_round_trip() {
        for name in Algorithm::NAMES {
            assert_eq!(Algorithm::from_name(name).unwrap().name(), name);
        }
        assert_eq!(Algorithm::from_name("J48").unwrap().name(), "c45");
        assert_eq!(Algorithm::from_name("JRip").unwrap().name(), "ripper");
        assert!(Algorithm::from_name("c").is_none());
    }

    #[test]
    fn hyperparameter_domains() {
        let p = SmoParams { c: 0.0, ..SmoParams::default() };
        assert!(ClassifierSpec::new(Algorithm::Smo(p)).validate().is_err());
        let p = C45Params { confidence_factor: 1.0, ..C45Params::default() };
        assert!(ClassifierSpec::new(Algorithm::C45(p)).validate().is_err());
        assert!(ClassifierSpec::new(Algorithm::C45(C45Params::default())).validate().is_ok());
    }
}
