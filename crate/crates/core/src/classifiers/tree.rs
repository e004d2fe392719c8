//! Binary decision trees over numeric thresholds, shared by C4.5 and REPTree.

use serde::{Deserialize, Serialize};

use super::columns::{class_counts, scan_columns};
use super::{argmax, ClassDistribution};
use crate::data::SparseVector;

/// A leaf holds the class counts of the training instances reaching it. A
/// split sends `x[feature] <= threshold` left and everything else right;
/// a missing value compares false and goes right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        counts: Vec<usize>,
    },
    Split {
        feature: usize,
        threshold: f64,
        counts: Vec<usize>,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn counts(&self) -> &[usize] {
        match self {
            Node::Leaf { counts } | Node::Split { counts, .. } => counts,
        }
    }

    fn counts_mut(&mut self) -> &mut Vec<usize> {
        match self {
            Node::Leaf { counts } | Node::Split { counts, .. } => counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    /// The leaf that `x` reaches.
    pub fn leaf_for(&self, x: &SparseVector) -> &Node {
        let mut node = self;
        while let Node::Split { feature, threshold, left, right, .. } = node {
            node = if x.get(*feature) <= *threshold { left } else { right };
        }
        node
    }

    /// Majority class of the reached leaf, lowest index on ties.
    pub fn predict_class(&self, x: &SparseVector) -> usize {
        argmax(self.leaf_for(x).counts())
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.num_leaves() + right.num_leaves(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => 1 + left.num_nodes() + right.num_nodes(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Misclassified instances among `idx` under this (sub)tree.
    pub fn errors_on(&self, rows: &[SparseVector], labels: &[usize], idx: &[usize]) -> usize {
        idx.iter().filter(|&&i| self.predict_class(&rows[i]) != labels[i]).count()
    }

    /// Misclassified training instances if this node were a leaf.
    pub fn leaf_errors(&self) -> usize {
        let c = self.counts();
        c.iter().sum::<usize>() - c[argmax(c)]
    }

    /// Replaces every node's counts with those of `idx`, keeping the shape.
    pub(crate) fn refill(&mut self, rows: &[SparseVector], labels: &[usize], idx: &[usize], k: usize) {
        *self.counts_mut() = class_counts(labels, idx, k);
        if let Node::Split { feature, threshold, left, right, .. } = self {
            let (l, r): (Vec<usize>, Vec<usize>) =
                idx.iter().partition(|&&i| rows[i].get(*feature) <= *threshold);
            left.refill(rows, labels, &l, k);
            right.refill(rows, labels, &r, k);
        }
    }
}

/// A trained tree. Leaves with no training instances predict uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub root: Node,
}

impl TreeModel {
    pub fn distribution(&self, x: &SparseVector) -> ClassDistribution {
        ClassDistribution::from_counts(
            &self.root.leaf_for(x).counts().iter().map(|&c| c as f64).collect::<Vec<_>>(),
        )
    }
}

pub(crate) fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

/// Information-theoretic quality of a binary partition, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStatistics {
    pub info_gain: f64,
    pub split_info: f64,
    pub gain_ratio: f64,
}

/// Gain, split information and gain ratio of partitioning a node into
/// `left` and `right` class counts. The ratio is 0 when split info is 0.
pub fn split_statistics(left: &[usize], right: &[usize]) -> SplitStatistics {
    let parent: Vec<usize> = left.iter().zip(right).map(|(a, b)| a + b).collect();
    let (nl, nr) = (left.iter().sum::<usize>() as f64, right.iter().sum::<usize>() as f64);
    let n = nl + nr;
    if n == 0.0 {
        return SplitStatistics { info_gain: 0.0, split_info: 0.0, gain_ratio: 0.0 };
    }
    let info_gain = entropy(&parent) - (nl / n) * entropy(left) - (nr / n) * entropy(right);
    let split_info = entropy(&[nl as usize, nr as usize]);
    let gain_ratio = if split_info > 0.0 { info_gain / split_info } else { 0.0 };
    SplitStatistics { info_gain, split_info, gain_ratio }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Criterion {
    /// Maximum gain ratio among splits with positive gain.
    GainRatio,
    /// Maximum information gain.
    InfoGain,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GrowParams {
    pub criterion: Criterion,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    /// When no split has positive gain, still split an impure node on the
    /// first admissible threshold.
    pub allow_zero_gain: bool,
}

const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    score: f64,
    gain: f64,
}

fn best_split(
    rows: &[SparseVector],
    labels: &[usize],
    idx: &[usize],
    k: usize,
    params: &GrowParams,
) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    let mut fallback: Option<Candidate> = None;
    let n = idx.len();
    let total = class_counts(labels, idx, k);
    for col in scan_columns(rows, labels, idx, k) {
        let mut left = vec![0usize; k];
        let mut n_left = 0usize;
        for v in 0..col.values.len().saturating_sub(1) {
            let group = &col.counts[v * k..(v + 1) * k];
            for c in 0..k {
                left[c] += group[c];
            }
            n_left += group.iter().sum::<usize>();
            if n_left < params.min_leaf || n - n_left < params.min_leaf {
                continue;
            }
            let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let stats = split_statistics(&left, &right);
            let score = match params.criterion {
                Criterion::GainRatio => stats.gain_ratio,
                Criterion::InfoGain => stats.info_gain,
            };
            let cand = Candidate {
                feature: col.feature,
                threshold: (col.values[v] + col.values[v + 1]) / 2.0,
                score,
                gain: stats.info_gain,
            };
            if fallback.is_none() {
                fallback = Some(cand);
            }
            if cand.gain > GAIN_EPS && best.is_none_or(|b| cand.score > b.score + GAIN_EPS) {
                best = Some(cand);
            }
        }
    }
    best.or(if params.allow_zero_gain { fallback } else { None })
}

/// Grows a tree top-down on the rows at `idx`.
pub(crate) fn grow(
    rows: &[SparseVector],
    labels: &[usize],
    idx: &[usize],
    k: usize,
    params: &GrowParams,
    depth: usize,
) -> Node {
    let counts = class_counts(labels, idx, k);
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    let too_small = idx.len() < 2 * params.min_leaf;
    let too_deep = params.max_depth.is_some_and(|d| depth >= d);
    if pure || too_small || too_deep {
        return Node::Leaf { counts };
    }
    let Some(split) = best_split(rows, labels, idx, k, params) else {
        return Node::Leaf { counts };
    };
    let (l, r): (Vec<usize>, Vec<usize>) =
        idx.iter().partition(|&&i| rows[i].get(split.feature) <= split.threshold);
    Node::Split {
        feature: split.feature,
        threshold: split.threshold,
        counts,
        left: Box::new(grow(rows, labels, &l, k, params, depth + 1)),
        right: Box::new(grow(rows, labels, &r, k, params, depth + 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn brute_entropy(counts: &[usize]) -> f64 {
        let n: usize = counts.iter().sum();
        let mut h = 0.0;
        for &c in counts {
            if c > 0 {
                let p = c as f64 / n as f64;
                h -= p * p.ln() / 2f64.ln();
            }
        }
        h
    }

    #[test]
    fn perfect_two_by_two_split_has_ratio_one() {
        let s = split_statistics(&[2, 0], &[0, 2]);
        assert_relative_eq!(s.info_gain, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.split_info, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.gain_ratio, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn uninformative_split_has_zero_gain() {
        let s = split_statistics(&[1, 1], &[1, 1]);
        assert!(s.info_gain.abs() < 1e-15);
        assert_eq!(split_statistics(&[0, 0], &[2, 2]).gain_ratio, 0.0);
    }

    #[test]
    fn uneven_split_matches_hand_entropies() {
        let (l, r) = ([3usize, 1], [0usize, 4]);
        let s = split_statistics(&l, &r);
        let expect = brute_entropy(&[3, 5]) - 0.5 * brute_entropy(&l) - 0.5 * brute_entropy(&r);
        assert_relative_eq!(s.info_gain, expect, epsilon = 1e-12);
        assert_relative_eq!(s.split_info, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thresholds_are_midpoints_and_routing_is_total() {
        let rows: Vec<SparseVector> =
            [1.0, 2.0, 4.0, 6.0].iter().map(|&v| SparseVector::from_pairs(vec![(0, v)])).collect();
        let labels = vec![0, 0, 1, 1];
        let params = GrowParams {
            criterion: Criterion::GainRatio,
            min_leaf: 1,
            max_depth: None,
            allow_zero_gain: false,
        };
        let tree = grow(&rows, &labels, &[0, 1, 2, 3], 2, &params, 0);
        match &tree {
            Node::Split { threshold, feature, .. } => {
                assert_eq!(*threshold, 3.0);
                assert_eq!(*feature, 0);
            }
            Node::Leaf { .. } => panic!("expected a split"),
        }
        assert_eq!(tree.num_leaves(), 2);
        assert_eq!(tree.errors_on(&rows, &labels, &[0, 1, 2, 3]), 0);
    }

    #[test]
    fn refill_preserves_shape() {
        let mut node = Node::Split {
            feature: 0,
            threshold: 0.5,
            counts: vec![0, 0],
            left: Box::new(Node::Leaf { counts: vec![0, 0] }),
            right: Box::new(Node::Leaf { counts: vec![0, 0] }),
        };
        let rows = vec![SparseVector::new(), SparseVector::from_pairs(vec![(0, 1.0)])];
        node.refill(&rows, &[0, 1], &[0, 1], 2);
        assert_eq!(node.counts(), &[1, 1]);
        assert_eq!(node.leaf_for(&rows[0]).counts(), &[1, 0]);
        assert_eq!(node.leaf_for(&rows[1]).counts(), &[0, 1]);
    }
}
