//! Linear support vector machines trained by sequential minimal optimization.
//!
//! The binary solver works on the dual
//!
//! ```text
//! min_a  1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j <x_i, x_j>
//! ```
//!
//! updating two multipliers per step. The pair is the maximal violating
//! `i` together with the `j` that gives the largest second-order decrease of
//! the objective; iteration stops once `max_up(-y G) - min_low(-y G) < tol`,
//! which bounds every KKT violation by `tol`.
//!
//! Multiclass problems are reduced one-vs-one. Before training, missing
//! values are replaced by training means (modes for nominal attributes) and
//! nominal attributes are expanded into one indicator column per value.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ClassDistribution;
use crate::data::{FeatureKind, NumericDataset, SparseVector};

/// Curvature used when the pair's kernel curvature is not positive.
const TAU: f64 = 1e-12;
/// Kernel column cache budget in bytes.
const CACHE_BYTES: usize = 256 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoParams {
    pub c: f64,
    pub tolerance: f64,
    /// Iteration cap per binary problem; `0` means `max(1_000_000, 100 n)`.
    pub max_iterations: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        Self { c: 1.0, tolerance: 1e-3, max_iterations: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmoError {
    #[error("labels must be -1 or +1 (found {0})")]
    InvalidLabel(f64),
    #[error("binary SMO needs at least one instance of each sign")]
    OneSided,
    #[error("instances and labels differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(
        "SMO did not converge after {iterations} iterations \
         (KKT violation {violation:.3e}, duality gap {duality_gap:.3e})"
    )]
    NotConverged { iterations: usize, violation: f64, duality_gap: f64 },
}

/// Result of a binary solve. The decision function is
/// `f(x) = sum_i alpha_i y_i <x_i, x> + bias`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// Final `max_up - min_low` gap of the optimality condition.
    pub violation: f64,
}

impl BinarySolution {
    /// Primal weight vector `sum_i alpha_i y_i x_i`.
    pub fn weights(&self, x: &[SparseVector], y: &[f64]) -> SparseVector {
        let mut pairs = Vec::new();
        for ((xi, &yi), &a) in x.iter().zip(y).zip(&self.alpha) {
            if a != 0.0 {
                pairs.extend(xi.iter().map(|(j, v)| (j, a * yi * v)));
            }
        }
        SparseVector::from_pairs(pairs)
    }

    pub fn decision(&self, x: &[SparseVector], y: &[f64], point: &SparseVector) -> f64 {
        x.iter()
            .zip(y)
            .zip(&self.alpha)
            .filter(|(_, &a)| a != 0.0)
            .map(|((xi, &yi), &a)| a * yi * xi.dot(point))
            .sum::<f64>()
            + self.bias
    }
}

/// Lazily computed linear-kernel columns with FIFO eviction.
struct KernelCache<'a> {
    x: &'a [SparseVector],
    columns: Vec<Option<Vec<f64>>>,
    order: VecDeque<usize>,
    capacity: usize,
    scratch: Vec<f64>,
}

impl<'a> KernelCache<'a> {
    fn new(x: &'a [SparseVector]) -> Self {
        let n = x.len();
        let dim = x.iter().filter_map(|v| v.entries().last().map(|&(i, _)| i + 1)).max().unwrap_or(0);
        let capacity = (CACHE_BYTES / (8 * n.max(1))).clamp(2, n.max(2));
        Self { x, columns: vec![None; n], order: VecDeque::new(), capacity, scratch: vec![0.0; dim] }
    }

    fn column(&mut self, i: usize) -> &[f64] {
        if self.columns[i].is_none() {
            if self.order.len() >= self.capacity {
                if let Some(old) = self.order.pop_front() {
                    self.columns[old] = None;
                }
            }
            for (j, v) in self.x[i].iter() {
                self.scratch[j] = v;
            }
            let col: Vec<f64> = self.x.iter().map(|xt| xt.dot_dense(&self.scratch)).collect();
            for (j, _) in self.x[i].iter() {
                self.scratch[j] = 0.0;
            }
            self.columns[i] = Some(col);
            self.order.push_back(i);
        }
        self.columns[i].as_deref().unwrap_or(&[])
    }
}

/// Solves the binary soft-margin dual with a linear kernel.
pub fn smo_solve_binary(
    x: &[SparseVector],
    y: &[f64],
    c: f64,
    tolerance: f64,
) -> Result<BinarySolution, SmoError> {
    solve(x, y, c, tolerance, 0)
}

pub(crate) fn solve(
    x: &[SparseVector],
    y: &[f64],
    c: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<BinarySolution, SmoError> {
    if x.len() != y.len() {
        return Err(SmoError::LengthMismatch(x.len(), y.len()));
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(SmoError::InvalidLabel(bad));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(SmoError::OneSided);
    }
    let n = x.len();
    let max_iterations = if max_iterations == 0 { (100 * n).max(1_000_000) } else { max_iterations };
    let diag: Vec<f64> = x.iter().map(SparseVector::squared_norm).collect();
    let mut cache = KernelCache::new(x);
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];

    let is_upper = |a: f64| a >= c;
    let is_lower = |a: f64| a <= 0.0;

    let mut iterations = 0;
    let violation = loop {
        // Working set selection.
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            let v = if y[t] > 0.0 {
                (!is_upper(alpha[t])).then(|| -grad[t])
            } else {
                (!is_lower(alpha[t])).then(|| grad[t])
            };
            if let Some(v) = v {
                if v >= gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        if let Some(i) = i_sel {
            let ki = cache.column(i).to_vec();
            let mut best = f64::INFINITY;
            for t in 0..n {
                let (eligible, grad_diff, v2) = if y[t] > 0.0 {
                    (!is_lower(alpha[t]), gmax + grad[t], grad[t])
                } else {
                    (!is_upper(alpha[t]), gmax - grad[t], -grad[t])
                };
                if !eligible {
                    continue;
                }
                gmax2 = gmax2.max(v2);
                if grad_diff > 0.0 {
                    let mut quad = diag[i] + diag[t] - 2.0 * ki[t];
                    if quad <= 0.0 {
                        quad = TAU;
                    }
                    let obj = -(grad_diff * grad_diff) / quad;
                    if obj <= best {
                        best = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }
        let gap = gmax + gmax2;
        let (Some(i), Some(j)) = (i_sel, j_sel) else { break gap.max(0.0) };
        if gap < tolerance {
            break gap;
        }
        if iterations >= max_iterations {
            let gap_primal = duality_gap(&alpha, &grad, y, c);
            return Err(SmoError::NotConverged {
                iterations,
                violation: gap,
                duality_gap: gap_primal,
            });
        }
        iterations += 1;

        let ki = cache.column(i).to_vec();
        let kj = cache.column(j).to_vec();
        let kij = ki[j];
        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_ai, old_aj);
        if y[i] != y[j] {
            let quad = (diag[i] + diag[j] + 2.0 * (y[i] * y[j] * kij)).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let quad = (diag[i] + diag[j] - 2.0 * (y[i] * y[j] * kij)).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (dai, daj) = (ai - old_ai, aj - old_aj);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * dai + y[j] * kj[t] * daj);
        }
    };

    Ok(BinarySolution { bias: -rho(&alpha, &grad, y, c), alpha, iterations, violation })
}

/// Offset `rho` with `f(x) = sum a_i y_i K(x_i, x) - rho`: the mean of
/// `y_i G_i` over free multipliers, else the midpoint of the feasible range.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum) = (0usize, 0.0);
    for ((&a, &g), &yi) in alpha.iter().zip(grad).zip(y) {
        let yg = yi * g;
        if a >= c {
            if yi < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if a <= 0.0 {
            if yi > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        (ub + lb) / 2.0
    }
}

/// Primal minus dual objective at the current iterate.
fn duality_gap(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let r = rho(alpha, grad, y, c);
    // a'Qa = sum a_i (G_i + 1); y_i f(x_i) = G_i + 1 - y_i rho.
    let quad: f64 = alpha.iter().zip(grad).map(|(a, g)| a * (g + 1.0)).sum();
    let hinge: f64 = grad
        .iter()
        .zip(y)
        .map(|(g, yi)| (1.0 - (g + 1.0 - yi * r)).max(0.0))
        .sum();
    let primal = 0.5 * quad + c * hinge;
    let dual = alpha.iter().sum::<f64>() - 0.5 * quad;
    primal - dual
}

/// Maps raw attributes to the binarized, mean-imputed input space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    /// Replacement for a missing value of each input attribute (for nominal
    /// attributes: the modal value index).
    pub fill: Vec<f64>,
    /// `(input attribute, arity, first output column)` for nominal inputs.
    pub nominal: Vec<(usize, usize, usize)>,
    /// Output column of each numeric input attribute.
    pub numeric_column: Vec<Option<usize>>,
    pub output_dim: usize,
}

impl Preprocessor {
    fn fit(data: &NumericDataset) -> Self {
        let d = data.num_features();
        let mut sums = vec![0.0; d];
        let mut missing = vec![0usize; d];
        let mut nominal_counts: Vec<Option<Vec<usize>>> = data
            .features
            .iter()
            .map(|f| match &f.kind {
                FeatureKind::Nominal(values) => Some(vec![0; values.len().max(1)]),
                FeatureKind::Numeric => None,
            })
            .collect();
        for row in &data.rows {
            for (j, v) in row.iter() {
                if v.is_nan() {
                    missing[j] += 1;
                } else {
                    sums[j] += v;
                }
            }
        }
        for (j, counts) in nominal_counts.iter_mut().enumerate() {
            if let Some(counts) = counts {
                let mut nonzero = 0;
                for row in &data.rows {
                    let v = row.get(j);
                    if !v.is_nan() && v != 0.0 {
                        if let Some(slot) = counts.get_mut(v as usize) {
                            *slot += 1;
                        }
                        nonzero += 1;
                    }
                }
                counts[0] += data.len() - nonzero - missing[j];
            }
        }
        let n = data.len();
        let fill = (0..d)
            .map(|j| match &nominal_counts[j] {
                Some(counts) => super::argmax(counts) as f64,
                None if n > missing[j] => sums[j] / (n - missing[j]) as f64,
                None => 0.0,
            })
            .collect();

        let mut nominal = Vec::new();
        let mut numeric_column = vec![None; d];
        let mut next = 0;
        for (j, f) in data.features.iter().enumerate() {
            match &f.kind {
                FeatureKind::Numeric => {
                    numeric_column[j] = Some(next);
                    next += 1;
                }
                FeatureKind::Nominal(values) => {
                    nominal.push((j, values.len(), next));
                    next += values.len();
                }
            }
        }
        Self { fill, nominal, numeric_column, output_dim: next }
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        let mut pairs = Vec::with_capacity(x.nnz() + self.nominal.len());
        for (j, v) in x.iter() {
            let Some(&Some(col)) = self.numeric_column.get(j) else { continue };
            let v = if v.is_nan() { self.fill[j] } else { v };
            pairs.push((col, v));
        }
        for &(j, arity, first) in &self.nominal {
            let mut v = x.get(j);
            if v.is_nan() {
                v = self.fill[j];
            }
            let value = v as usize;
            if value < arity {
                pairs.push((first + value, 1.0));
            }
        }
        SparseVector::from_pairs(pairs)
    }
}

/// One pairwise machine. Positive decision values vote for `first`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMachine {
    pub first: usize,
    pub second: usize,
    pub weights: SparseVector,
    pub bias: f64,
    /// Set when one side of the pair has no training instances.
    pub constant_vote: Option<usize>,
}

impl PairMachine {
    pub fn decision(&self, x: &SparseVector) -> f64 {
        self.weights.dot(x) + self.bias
    }

    pub fn vote(&self, x: &SparseVector) -> usize {
        if let Some(c) = self.constant_vote {
            return c;
        }
        if self.decision(x) >= 0.0 {
            self.first
        } else {
            self.second
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoModel {
    pub preprocessor: Preprocessor,
    pub machines: Vec<PairMachine>,
}

pub fn train_smo(data: &NumericDataset, params: &SmoParams) -> Result<SmoModel, SmoError> {
    let preprocessor = Preprocessor::fit(data);
    let rows: Vec<SparseVector> = data.rows.iter().map(|r| preprocessor.apply(r)).collect();
    let k = data.num_classes();
    let mut machines = Vec::with_capacity(k * (k - 1) / 2);
    for first in 0..k {
        for second in first + 1..k {
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (row, &label) in rows.iter().zip(&data.labels) {
                if label == first || label == second {
                    xs.push(row.clone());
                    ys.push(if label == first { 1.0 } else { -1.0 });
                }
            }
            let has_first = ys.contains(&1.0);
            let has_second = ys.contains(&-1.0);
            let machine = if has_first && has_second {
                let sol = solve(&xs, &ys, params.c, params.tolerance, params.max_iterations)?;
                PairMachine {
                    first,
                    second,
                    weights: sol.weights(&xs, &ys),
                    bias: sol.bias,
                    constant_vote: None,
                }
            } else {
                let vote = if has_second && !has_first { second } else { first };
                PairMachine {
                    first,
                    second,
                    weights: SparseVector::new(),
                    bias: 0.0,
                    constant_vote: Some(vote),
                }
            };
            machines.push(machine);
        }
    }
    Ok(SmoModel { preprocessor, machines })
}

impl SmoModel {
    /// Pairwise vote counts per class.
    pub fn votes(&self, x: &SparseVector, k: usize) -> Vec<usize> {
        let z = self.preprocessor.apply(x);
        let mut votes = vec![0; k];
        for m in &self.machines {
            votes[m.vote(&z)] += 1;
        }
        votes
    }

    /// Vote share of each class.
    pub fn distribution(&self, x: &SparseVector, k: usize) -> ClassDistribution {
        let votes = self.votes(x, k);
        let total = self.machines.len().max(1) as f64;
        if self.machines.is_empty() {
            return ClassDistribution::uniform(k);
        }
        ClassDistribution(votes.into_iter().map(|v| v as f64 / total).collect())
    }
}

/// Dual objective `e'a - 1/2 a'Qa` (to be maximized) for a linear kernel.
pub fn dual_objective(x: &[SparseVector], y: &[f64], alpha: &[f64]) -> f64 {
    let mut quad = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * x[i].dot(&x[j]);
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Feature;

    fn pts(v: &[&[f64]]) -> Vec<SparseVector> {
        v.iter().map(|r| SparseVector::from_dense(r)).collect()
    }

    #[test]
    fn analytic_one_dimensional_case() {
        let x = pts(&[&[-1.0], &[1.0]]);
        let y = [-1.0, 1.0];
        let sol = smo_solve_binary(&x, &y, 1.0, 1e-3).unwrap();
        assert!((sol.alpha[0] - 0.5).abs() < 1e-12);
        assert!((sol.alpha[1] - 0.5).abs() < 1e-12);
        assert!(sol.bias.abs() < 1e-12);
        for t in [-2.0, -0.3, 0.7, 3.0] {
            let f = sol.decision(&x, &y, &SparseVector::from_dense(&[t]));
            assert!((f - t).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicated_points_keep_boundary() {
        let x = pts(&[&[-1.0], &[1.0]]);
        let y = [-1.0, 1.0];
        let xd = pts(&[&[-1.0], &[1.0], &[-1.0], &[1.0]]);
        let yd = [-1.0, 1.0, -1.0, 1.0];
        let a = smo_solve_binary(&x, &y, 1.0, 1e-3).unwrap();
        let b = smo_solve_binary(&xd, &yd, 1.0, 1e-3).unwrap();
        let wa = a.weights(&x, &y).get(0);
        let wb = b.weights(&xd, &yd).get(0);
        assert!((wa - wb).abs() < 1e-9);
        assert!((a.bias - b.bias).abs() < 1e-9);
        assert!((b.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kkt_and_equality_constraint_hold() {
        let x = pts(&[&[0.0, 1.0], &[1.0, 2.0], &[2.0, 0.5], &[3.0, 3.0], &[0.5, 0.2], &[2.5, 2.0]]);
        let y = [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let c = 0.7;
        let tol = 1e-3;
        let sol = smo_solve_binary(&x, &y, c, tol).unwrap();
        let sum: f64 = sol.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        assert!(sum.abs() < 1e-9);
        for i in 0..x.len() {
            let a = sol.alpha[i];
            assert!((0.0..=c).contains(&a));
            let m = y[i] * sol.decision(&x, &y, &x[i]);
            if a <= 0.0 {
                assert!(m >= 1.0 - tol);
            } else if a >= c {
                assert!(m <= 1.0 + tol);
            } else {
                assert!((m - 1.0).abs() <= tol);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let x = pts(&[&[1.0], &[2.0]]);
        assert_eq!(smo_solve_binary(&x, &[1.0, 1.0], 1.0, 1e-3).unwrap_err(), SmoError::OneSided);
        assert!(matches!(
            smo_solve_binary(&x, &[1.0, 0.0], 1.0, 1e-3),
            Err(SmoError::InvalidLabel(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_gap() {
        let x = pts(&[&[0.0, 1.0], &[1.0, 2.0], &[2.0, 0.5], &[3.0, 3.0], &[0.5, 0.2], &[2.5, 2.0]]);
        let y = [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        match solve(&x, &y, 10.0, 1e-12, 1) {
            Err(SmoError::NotConverged { iterations, duality_gap, .. }) => {
                assert_eq!(iterations, 1);
                assert!(duality_gap > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    fn multi(rows: &[(&[f64], usize)], k: usize) -> NumericDataset {
        NumericDataset {
            relation: "smo".into(),
            features: (0..rows[0].0.len()).map(|i| Feature::numeric(format!("f{i}"))).collect(),
            class_name: "class".into(),
            class_labels: (0..k).map(|i| format!("L{i}")).collect(),
            rows: rows.iter().map(|(r, _)| SparseVector::from_dense(r)).collect(),
            labels: rows.iter().map(|&(_, y)| y).collect(),
        }
    }

    #[test]
    fn one_vs_one_machine_count_and_votes() {
        let d = multi(
            &[
                (&[5.0, 0.0, 0.0], 0),
                (&[4.0, 0.0, 0.0], 0),
                (&[0.0, 5.0, 0.0], 1),
                (&[0.0, 4.0, 0.0], 1),
                (&[0.0, 0.0, 5.0], 2),
                (&[0.0, 0.0, 4.0], 2),
            ],
            5,
        );
        let m = train_smo(&d, &SmoParams::default()).unwrap();
        assert_eq!(m.machines.len(), 10);
        for (row, &label) in d.rows.iter().zip(&d.labels) {
            let p = m.distribution(row, 5);
            assert!((p.0.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.0.iter().all(|v| (v * 10.0 - (v * 10.0).round()).abs() < 1e-12));
            assert_eq!(p.argmax(), label);
        }
        // Classes 3 and 4 are empty: their machine votes for the first side.
        let empty_pair = m.machines.iter().find(|mc| mc.first == 3 && mc.second == 4).unwrap();
        assert_eq!(empty_pair.constant_vote, Some(3));
        let vs_empty = m.machines.iter().find(|mc| mc.first == 0 && mc.second == 3).unwrap();
        assert_eq!(vs_empty.constant_vote, Some(0));
    }

    #[test]
    fn two_classes_match_binary_solver() {
        let d = multi(&[(&[1.0, 0.0], 0), (&[2.0, 1.0], 0), (&[0.0, 1.0], 1), (&[0.0, 3.0], 1)], 2);
        let m = train_smo(&d, &SmoParams::default()).unwrap();
        let y: Vec<f64> = d.labels.iter().map(|&l| if l == 0 { 1.0 } else { -1.0 }).collect();
        let sol = smo_solve_binary(&d.rows, &y, 1.0, 1e-3).unwrap();
        for row in &d.rows {
            let f1 = m.machines[0].decision(row);
            let f2 = sol.decision(&d.rows, &y, row);
            assert!((f1 - f2).abs() < 1e-9);
        }
    }

    #[test]
    fn missing_values_replaced_by_mean() {
        let mut d = multi(&[(&[2.0], 0), (&[4.0], 0), (&[-3.0], 1), (&[-5.0], 1)], 2);
        d.rows.push(SparseVector::from_pairs(vec![(0, f64::NAN)]));
        d.labels.push(0);
        let m = train_smo(&d, &SmoParams::default()).unwrap();
        assert!((m.preprocessor.fill[0] - (-0.5)).abs() < 1e-12);
        let z = m.preprocessor.apply(&SparseVector::from_pairs(vec![(0, f64::NAN)]));
        assert_eq!(z.entries(), &[(0, -0.5)]);
    }

    #[test]
    fn nominal_attributes_binarized() {
        let mut d = multi(&[(&[0.0, 1.0], 0), (&[2.0, 0.0], 1), (&[0.0, 3.0], 0), (&[2.0, 0.0], 1)], 2);
        d.features[0].kind = FeatureKind::Nominal(vec!["a".into(), "b".into(), "c".into()]);
        let m = train_smo(&d, &SmoParams::default()).unwrap();
        assert_eq!(m.preprocessor.output_dim, 4);
        let z = m.preprocessor.apply(&d.rows[0]);
        assert_eq!(z.entries(), &[(0, 1.0), (3, 1.0)]);
        let z = m.preprocessor.apply(&d.rows[1]);
        assert_eq!(z.entries(), &[(2, 1.0)]);
        for (row, &label) in d.rows.iter().zip(&d.labels) {
            assert_eq!(m.distribution(row, 2).argmax(), label);
        }
    }

    #[test]
    fn vote_tie_goes_to_lowest_class() {
        let machines = vec![
            PairMachine { first: 0, second: 1, weights: SparseVector::new(), bias: -1.0, constant_vote: None },
            PairMachine { first: 0, second: 2, weights: SparseVector::new(), bias: 1.0, constant_vote: None },
            PairMachine { first: 1, second: 2, weights: SparseVector::new(), bias: -1.0, constant_vote: None },
        ];
        let pre = Preprocessor { fill: vec![], nominal: vec![], numeric_column: vec![], output_dim: 0 };
        let m = SmoModel { preprocessor: pre, machines };
        let p = m.distribution(&SparseVector::new(), 3);
        assert_eq!(m.votes(&SparseVector::new(), 3), vec![1, 1, 1]);
        assert_eq!(p.argmax(), 0);
    }
}
