//! Metrics, evaluation reports and the validation protocols.

mod metrics;
mod protocols;
mod report;

use thiserror::Error;

pub use metrics::{
    auc, confusion_matrix, f_beta, mae, precision_recall, roc_curve, weighted_average, ConfusionMatrix, RocPoint,
};
pub use protocols::{cross_validate, evaluate_holdout, evaluate_resubstitution, percentage_split, CrossValidation};
pub use report::{ClassMetrics, EvaluationReport, Protocol, WeightedMetrics};

use crate::pipeline::PipelineError;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("label {label} is outside 0..{classes}")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("total support is zero")]
    ZeroSupport,
    #[error("ROC needs at least one positive and one negative instance")]
    SingleClass,
    #[error("no instances to evaluate")]
    NoInstances,
    #[error("cannot use {folds} folds on {instances} instances (need 2 <= folds <= instances)")]
    InvalidFolds { folds: usize, instances: usize },
    #[error("training percentage must lie strictly between 0 and 100, got {0}")]
    InvalidPercentage(f64),
    #[error("split leaves {train} training and {test} test instances; both must be non-empty")]
    EmptySplitPart { train: usize, test: usize },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

impl From<crate::features::FeatureError> for EvalError {
    fn from(e: crate::features::FeatureError) -> Self {
        EvalError::Pipeline(e.into())
    }
}
