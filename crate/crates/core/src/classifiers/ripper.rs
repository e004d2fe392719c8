//! RIPPER rule induction.
//!
//! Classes are handled from least to most frequent. For each class a rule set
//! separates it from the instances not yet covered: rules are grown on part of
//! the data by FOIL gain and pruned on the rest by `(p - n) / (p + n)`. Rule
//! addition stops once the description length exceeds the best seen by more
//! than 64 bits, or a pruned rule errs on more than half of its pruning
//! coverage. Optimization passes then try a fresh replacement and an extended
//! revision of every rule, keeping whichever variant gives the shortest
//! description length.
//!
//! Description length, in bits, of a rule set over `N` instances:
//! * each rule with `k` conditions costs
//!   `0.5 * (log2 k + 2 log2(log2 k) + S(T, k, k / T))`, where `T` counts the
//!   candidate conditions (two per distinct attribute value) and
//!   `S(t, k, p) = -k log2 p - (t - k) log2(1 - p)`;
//! * the exceptions cost `log2(N + 1)` plus `S` terms for the false positives
//!   among covered and false negatives among uncovered instances, with the
//!   expected error split by the positive-class rate.

use serde::{Deserialize, Serialize};

use super::columns::{class_counts, scan_columns};
use super::{argmax, reject_missing, ClassDistribution, ClassifierError};
use crate::data::{NumericDataset, SparseVector};
use crate::sampling::{rng, stratified_holdout};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RipperParams {
    /// The pruning set is one fold of this many.
    pub folds: usize,
    pub optimizations: usize,
    /// Minimum number of grow-set instances a condition must cover.
    pub min_coverage: usize,
}

impl Default for RipperParams {
    fn default() -> Self {
        Self { folds: 3, optimizations: 2, min_coverage: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

/// `x[feature] <= value` or `x[feature] >= value`; missing values fail both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub feature: usize,
    pub comparison: Comparison,
    pub value: f64,
}

impl Condition {
    pub fn holds(&self, x: &SparseVector) -> bool {
        let v = x.get(self.feature);
        match self.comparison {
            Comparison::AtMost => v <= self.value,
            Comparison::AtLeast => v >= self.value,
        }
    }
}

fn covers(conditions: &[Condition], x: &SparseVector) -> bool {
    conditions.iter().all(|c| c.holds(x))
}

/// A conjunction predicting `class`, with the class counts of the training
/// instances for which it is the first matching rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    pub class: usize,
    pub counts: Vec<usize>,
}

impl Rule {
    pub fn covers(&self, x: &SparseVector) -> bool {
        covers(&self.conditions, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipperModel {
    pub rules: Vec<Rule>,
    pub default_class: usize,
    pub default_counts: Vec<usize>,
}

impl RipperModel {
    /// Index of the first rule covering `x`; `None` means the default.
    pub fn matching_rule(&self, x: &SparseVector) -> Option<usize> {
        self.rules.iter().position(|r| r.covers(x))
    }

    /// Coverage counts of the matching rule (or the default), normalized; a
    /// point mass on its class when it covered no training instance.
    pub fn distribution(&self, x: &SparseVector, k: usize) -> ClassDistribution {
        let (class, counts) = match self.matching_rule(x) {
            Some(i) => (self.rules[i].class, &self.rules[i].counts),
            None => (self.default_class, &self.default_counts),
        };
        if counts.iter().sum::<usize>() == 0 {
            ClassDistribution::point(k, class)
        } else {
            ClassDistribution::from_counts(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
        }
    }
}

/// FOIL information gain, in bits, of refining a rule whose coverage goes
/// from `p0` positives / `n0` negatives to `p1` / `n1`. Zero when either
/// coverage has no positives.
pub fn foil_gain(p0: usize, n0: usize, p1: usize, n1: usize) -> f64 {
    if p0 == 0 || p1 == 0 {
        return 0.0;
    }
    let precision = |p: usize, n: usize| (p as f64 / (p + n) as f64).log2();
    p1 as f64 * (precision(p1, n1) - precision(p0, n0))
}

const GAIN_EPS: f64 = 1e-12;
const DL_SURPLUS: f64 = 64.0;
const REDUNDANCY: f64 = 0.5;

fn subset_dl(t: f64, k: f64, p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0 - f64::EPSILON);
    let mut bits = if p > 0.0 { -k * p.log2() } else { 0.0 };
    if t > k {
        bits -= (t - k) * (1.0 - p).log2();
    }
    bits
}

fn theory_dl(k: usize, total_conditions: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k = k as f64;
    let mut bits = k.log2();
    if k > 1.0 {
        bits += 2.0 * bits.log2();
    }
    bits += subset_dl(total_conditions, k, k / total_conditions.max(k));
    REDUNDANCY * bits
}

fn data_dl(exp_fp: f64, cover: f64, uncover: f64, fp: f64, fn_: f64) -> f64 {
    let mut bits = (cover + uncover + 1.0).log2();
    if cover > uncover {
        let expected = exp_fp * (fp + fn_);
        bits += subset_dl(cover, fp, expected / cover);
        if uncover > 0.0 {
            bits += subset_dl(uncover, fn_, fn_ / uncover);
        }
    } else {
        let expected = (1.0 - exp_fp) * (fp + fn_);
        if cover > 0.0 {
            bits += subset_dl(cover, fp, fp / cover);
        }
        bits += subset_dl(uncover, fn_, expected / uncover);
    }
    bits
}

/// One class against the rest, over a fixed set of instances.
struct ClassRun<'a> {
    rows: &'a [SparseVector],
    /// 0 for the target class, 1 otherwise; indexed by row.
    binary: Vec<usize>,
    data: Vec<usize>,
    total_conditions: f64,
    exp_fp: f64,
    params: &'a RipperParams,
}

type Conditions = Vec<Condition>;

impl ClassRun<'_> {
    fn is_pos(&self, i: usize) -> bool {
        self.binary[i] == 0
    }

    fn coverage(&self, conditions: &[Condition], idx: &[usize]) -> (usize, usize) {
        idx.iter().filter(|&&i| covers(conditions, &self.rows[i])).fold((0, 0), |(p, n), &i| {
            if self.is_pos(i) {
                (p + 1, n)
            } else {
                (p, n + 1)
            }
        })
    }

    fn uncovered(&self, rules: &[Conditions], idx: &[usize]) -> Vec<usize> {
        idx.iter().copied().filter(|&i| !rules.iter().any(|r| covers(r, &self.rows[i]))).collect()
    }

    fn total_dl(&self, rules: &[Conditions]) -> f64 {
        let theory: f64 = rules.iter().map(|r| theory_dl(r.len(), self.total_conditions)).sum();
        let (mut cover, mut fp, mut fn_) = (0usize, 0usize, 0usize);
        for &i in &self.data {
            let covered = rules.iter().any(|r| covers(r, &self.rows[i]));
            match (covered, self.is_pos(i)) {
                (true, false) => {
                    cover += 1;
                    fp += 1;
                }
                (true, true) => cover += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
        let uncover = self.data.len() - cover;
        theory + data_dl(self.exp_fp, cover as f64, uncover as f64, fp as f64, fn_ as f64)
    }

    fn split(&self, idx: &[usize], rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
        stratified_holdout(idx, &self.binary, 1.0 / self.params.folds as f64, rng)
    }

    /// Adds the condition of highest FOIL gain until no negatives remain
    /// covered or no condition improves. Candidates are thresholds at the
    /// distinct values of the covered instances; ties keep the lowest
    /// feature, then `<=` before `>=`, then the smaller value.
    fn grow(&self, mut conditions: Conditions, grow_idx: &[usize]) -> Conditions {
        let mut covered: Vec<usize> =
            grow_idx.iter().copied().filter(|&i| covers(&conditions, &self.rows[i])).collect();
        loop {
            let (p0, n0) = self.coverage(&[], &covered);
            if p0 == 0 || n0 == 0 {
                return conditions;
            }
            let mut best: Option<(f64, Condition)> = None;
            let mut consider = |gain: f64, cond: Condition, p1: usize, n1: usize| {
                if p1 + n1 >= self.params.min_coverage
                    && gain > best.map_or(GAIN_EPS, |b| b.0 + GAIN_EPS)
                {
                    best = Some((gain, cond));
                }
            };
            for col in scan_columns(self.rows, &self.binary, &covered, 2) {
                let m = col.values.len();
                let (mut p, mut n) = (0, 0);
                for v in 0..m.saturating_sub(1) {
                    p += col.counts[2 * v];
                    n += col.counts[2 * v + 1];
                    let cond = Condition { feature: col.feature, comparison: Comparison::AtMost, value: col.values[v] };
                    consider(foil_gain(p0, n0, p, n), cond, p, n);
                }
                let (mut p, mut n) = (p0, n0);
                for v in 1..m {
                    p -= col.counts[2 * (v - 1)];
                    n -= col.counts[2 * (v - 1) + 1];
                    let cond = Condition { feature: col.feature, comparison: Comparison::AtLeast, value: col.values[v] };
                    consider(foil_gain(p0, n0, p, n), cond, p, n);
                }
            }
            let Some((_, cond)) = best else {
                return conditions;
            };
            covered.retain(|&i| cond.holds(&self.rows[i]));
            conditions.push(cond);
        }
    }

    /// Keeps the prefix (at least `min_len` conditions, and at least one)
    /// with the highest `(p - n) / (p + n)` on the pruning set; ties keep the
    /// shorter prefix.
    fn prune(&self, conditions: Conditions, prune_idx: &[usize], min_len: usize) -> Conditions {
        let min_len = min_len.max(1);
        if prune_idx.is_empty() || conditions.len() <= min_len {
            return conditions;
        }
        let mut best = (f64::NEG_INFINITY, conditions.len());
        for len in min_len..=conditions.len() {
            let (p, n) = self.coverage(&conditions[..len], prune_idx);
            let worth = if p + n == 0 { 0.0 } else { (p as f64 - n as f64) / (p + n) as f64 };
            if worth > best.0 {
                best = (worth, len);
            }
        }
        conditions[..best.1].to_vec()
    }

    fn has_positive(&self, idx: &[usize]) -> bool {
        idx.iter().any(|&i| self.is_pos(i))
    }

    /// Appends rules until the positives are covered or a stopping rule fires.
    fn extend(&self, mut rules: Vec<Conditions>, rng: &mut ChaCha8Rng) -> Vec<Conditions> {
        let mut min_dl = self.total_dl(&rules);
        let mut remaining = self.uncovered(&rules, &self.data);
        while self.has_positive(&remaining) {
            let (grow_idx, prune_idx) = self.split(&remaining, rng);
            let rule = self.grow(Vec::new(), &grow_idx);
            let rule = self.prune(rule, &prune_idx, 1);
            let (pp, pn) = self.coverage(&rule, &prune_idx);
            let (true_pos, _) = self.coverage(&rule, &remaining);
            rules.push(rule);
            let dl = self.total_dl(&rules);
            min_dl = min_dl.min(dl);
            let prune_error_high = pp + pn > 0 && pn as f64 / (pp + pn) as f64 > 0.5;
            if dl > min_dl + DL_SURPLUS || true_pos == 0 || prune_error_high {
                rules.pop();
                break;
            }
            let last = rules.last().expect("rule just pushed");
            remaining.retain(|&i| !covers(last, &self.rows[i]));
        }
        rules
    }

    /// Deletes, last to first, every rule whose removal shortens the
    /// description length.
    fn reduce_dl(&self, mut rules: Vec<Conditions>) -> Vec<Conditions> {
        let mut current = self.total_dl(&rules);
        for i in (0..rules.len()).rev() {
            let mut without = rules.clone();
            without.remove(i);
            let dl = self.total_dl(&without);
            if dl < current {
                rules = without;
                current = dl;
            }
        }
        rules
    }

    fn optimize(&self, mut rules: Vec<Conditions>, rng: &mut ChaCha8Rng) -> Vec<Conditions> {
        for i in 0..rules.len() {
            let data_i = self.uncovered(&rules[..i], &self.data);
            if !self.has_positive(&data_i) {
                continue;
            }
            let (grow_idx, prune_idx) = self.split(&data_i, rng);
            let replacement = self.prune(self.grow(Vec::new(), &grow_idx), &prune_idx, 1);
            let original_len = rules[i].len();
            let revision = self.prune(self.grow(rules[i].clone(), &grow_idx), &prune_idx, original_len);
            let mut best_dl = self.total_dl(&rules);
            let mut chosen = None;
            for variant in [replacement, revision] {
                let mut trial = rules.clone();
                trial[i] = variant;
                let dl = self.total_dl(&trial);
                if dl < best_dl {
                    best_dl = dl;
                    chosen = Some(trial);
                }
            }
            if let Some(trial) = chosen {
                rules = trial;
            }
        }
        rules
    }

    fn learn(&self, rng: &mut ChaCha8Rng) -> Vec<Conditions> {
        let mut rules = self.reduce_dl(self.extend(Vec::new(), rng));
        for _ in 0..self.params.optimizations {
            rules = self.optimize(rules, rng);
            rules = self.reduce_dl(self.extend(rules, rng));
        }
        rules
    }
}

fn count_conditions(rows: &[SparseVector], binary: &[usize], idx: &[usize]) -> f64 {
    scan_columns(rows, binary, idx, 2).iter().map(|c| 2 * c.values.len()).sum::<usize>() as f64
}

pub fn train_ripper(data: &NumericDataset, params: &RipperParams, seed: u64) -> Result<RipperModel, ClassifierError> {
    reject_missing(data, "RIPPER")?;
    let k = data.num_classes();
    let mut rng = rng(seed);
    let all: Vec<usize> = (0..data.len()).collect();
    let totals = class_counts(&data.labels, &all, k);
    let mut order: Vec<usize> = (0..k).filter(|&c| totals[c] > 0).collect();
    order.sort_by_key(|&c| totals[c]);

    let mut remaining = all.clone();
    let mut learned: Vec<(Conditions, usize)> = Vec::new();
    for &class in order.iter().take(order.len().saturating_sub(1)) {
        let binary: Vec<usize> = data.labels.iter().map(|&y| usize::from(y != class)).collect();
        let positives = remaining.iter().filter(|&&i| binary[i] == 0).count();
        if positives == 0 || remaining.is_empty() {
            continue;
        }
        let run = ClassRun {
            rows: &data.rows,
            total_conditions: count_conditions(&data.rows, &binary, &remaining),
            exp_fp: positives as f64 / remaining.len() as f64,
            binary,
            data: remaining.clone(),
            params,
        };
        let rules = run.learn(&mut rng);
        remaining = run.uncovered(&rules, &remaining);
        learned.extend(rules.into_iter().map(|r| (r, class)));
    }

    let leftover = class_counts(&data.labels, &remaining, k);
    let default_class = if remaining.is_empty() {
        *order.last().unwrap_or(&0)
    } else {
        argmax(&leftover)
    };
    let mut rules: Vec<Rule> = learned
        .into_iter()
        .map(|(conditions, class)| Rule { conditions, class, counts: vec![0; k] })
        .collect();
    let mut default_counts = vec![0; k];
    for (x, &y) in data.rows.iter().zip(&data.labels) {
        match rules.iter().position(|r| r.covers(x)) {
            Some(i) => rules[i].counts[y] += 1,
            None => default_counts[y] += 1,
        }
    }
    Ok(RipperModel { rules, default_class, default_counts })
}
