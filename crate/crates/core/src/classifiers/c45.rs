//! C4.5 decision trees: gain-ratio splits and pessimistic subtree replacement.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::tree::{grow, Criterion, GrowParams, Node, TreeModel};
use super::{reject_missing, ClassifierError};
use crate::data::NumericDataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct C45Params {
    pub confidence_factor: f64,
    pub min_leaf: usize,
    pub pruned: bool,
}

impl Default for C45Params {
    fn default() -> Self {
        Self { confidence_factor: 0.25, min_leaf: 2, pruned: true }
    }
}

/// Extra errors to add to `errors` observed among `n` instances so the sum is
/// the upper confidence bound at level `cf` on the true error count.
pub fn pessimistic_extra_errors(n: f64, errors: f64, cf: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if errors < 1.0 {
        // Exact binomial bound for zero errors, interpolated up to one.
        let base = n * (1.0 - cf.powf(1.0 / n));
        if errors == 0.0 {
            return base;
        }
        return base + errors * (pessimistic_extra_errors(n, 1.0, cf) - base);
    }
    if errors + 0.5 >= n {
        return (n - errors).max(0.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - cf);
    let f = (errors + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt())
        / (1.0 + z * z / n);
    r * n - errors
}

fn leaf_estimate(node: &Node, cf: f64) -> f64 {
    let n = node.counts().iter().sum::<usize>() as f64;
    let e = node.leaf_errors() as f64;
    e + pessimistic_extra_errors(n, e, cf)
}

fn subtree_estimate(node: &Node, cf: f64) -> f64 {
    match node {
        Node::Leaf { .. } => leaf_estimate(node, cf),
        Node::Split { left, right, .. } => subtree_estimate(left, cf) + subtree_estimate(right, cf),
    }
}

/// Bottom-up: a subtree becomes a leaf when the leaf's estimated errors do
/// not exceed the subtree's by more than 0.1.
fn prune(node: &mut Node, cf: f64) {
    if let Node::Split { left, right, .. } = node {
        prune(left, cf);
        prune(right, cf);
        if leaf_estimate(node, cf) <= subtree_estimate(node, cf) + 0.1 {
            *node = Node::Leaf { counts: node.counts().to_vec() };
        }
    }
}

pub fn train_c45(data: &NumericDataset, params: &C45Params) -> Result<TreeModel, ClassifierError> {
    reject_missing(data, "C4.5")?;
    let idx: Vec<usize> = (0..data.len()).collect();
    let grow_params = GrowParams {
        criterion: Criterion::GainRatio,
        min_leaf: params.min_leaf,
        max_depth: None,
        // Consistent data must be fit exactly even where no single threshold
        // has positive gain (XOR-like interactions).
        allow_zero_gain: true,
    };
    let mut root = grow(&data.rows, &data.labels, &idx, data.num_classes(), &grow_params, 0);
    if params.pruned {
        prune(&mut root, params.confidence_factor);
    }
    Ok(TreeModel { root })
}
