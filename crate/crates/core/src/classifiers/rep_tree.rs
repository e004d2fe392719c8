//! REPTree: information-gain trees with reduced-error pruning on a holdout.

use serde::{Deserialize, Serialize};

use super::columns::class_counts;
use super::tree::{grow, Criterion, GrowParams, Node, TreeModel};
use super::{argmax, reject_missing, ClassifierError};
use crate::data::{NumericDataset, SparseVector};
use crate::sampling::{rng, stratified_holdout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RepTreeParams {
    pub prune_fraction: f64,
    pub min_leaf: usize,
    pub pruned: bool,
    pub max_depth: Option<usize>,
}

impl Default for RepTreeParams {
    fn default() -> Self {
        Self { prune_fraction: 1.0 / 3.0, min_leaf: 2, pruned: true, max_depth: None }
    }
}

/// Bottom-up reduced-error pruning; returns the pruned subtree's error count
/// on `prune_idx`. A subtree becomes a leaf when the leaf would make no more
/// prune-set errors than the subtree.
fn reduce_errors(node: &mut Node, rows: &[SparseVector], labels: &[usize], prune_idx: &[usize]) -> usize {
    let majority = argmax(node.counts());
    let leaf_errors = prune_idx.iter().filter(|&&i| labels[i] != majority).count();
    let Node::Split { feature, threshold, left, right, .. } = node else {
        return leaf_errors;
    };
    let (l, r): (Vec<usize>, Vec<usize>) =
        prune_idx.iter().partition(|&&i| rows[i].get(*feature) <= *threshold);
    let subtree_errors = reduce_errors(left, rows, labels, &l) + reduce_errors(right, rows, labels, &r);
    if leaf_errors <= subtree_errors {
        *node = Node::Leaf { counts: node.counts().to_vec() };
        leaf_errors
    } else {
        subtree_errors
    }
}

/// Grows on `grow_idx` and prunes against `prune_idx`. Returns
/// `(unpruned, pruned)`; both carry grow-set counts.
pub fn grow_and_prune(
    data: &NumericDataset,
    grow_idx: &[usize],
    prune_idx: &[usize],
    params: &RepTreeParams,
) -> (Node, Node) {
    let grow_params = GrowParams {
        criterion: Criterion::InfoGain,
        min_leaf: params.min_leaf,
        max_depth: params.max_depth,
        allow_zero_gain: false,
    };
    let unpruned = grow(&data.rows, &data.labels, grow_idx, data.num_classes(), &grow_params, 0);
    let mut pruned = unpruned.clone();
    reduce_errors(&mut pruned, &data.rows, &data.labels, prune_idx);
    (unpruned, pruned)
}

/// The holdout split is stratified and seeded. After pruning, node counts
/// are refilled from the full training set.
pub fn train_rep_tree(
    data: &NumericDataset,
    params: &RepTreeParams,
    seed: u64,
) -> Result<TreeModel, ClassifierError> {
    reject_missing(data, "REPTree")?;
    let k = data.num_classes();
    let all: Vec<usize> = (0..data.len()).collect();
    if !params.pruned {
        let (tree, _) = grow_and_prune(data, &all, &[], &RepTreeParams { pruned: false, ..params.clone() });
        return Ok(TreeModel { root: tree });
    }
    if data.len() < 3 {
        return Ok(TreeModel { root: Node::Leaf { counts: class_counts(&data.labels, &all, k) } });
    }
    let (grow_idx, prune_idx) = stratified_holdout(&all, &data.labels, params.prune_fraction, &mut rng(seed));
    if grow_idx.is_empty() {
        return Ok(TreeModel { root: Node::Leaf { counts: class_counts(&data.labels, &all, k) } });
    }
    let (_, mut root) = grow_and_prune(data, &grow_idx, &prune_idx, params);
    root.refill(&data.rows, &data.labels, &all, k);
    Ok(TreeModel { root })
}
