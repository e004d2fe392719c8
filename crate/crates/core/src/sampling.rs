//! Seeded shuffling and stratified partitioning.
//!
//! All randomness goes through ChaCha8 so that a seed gives the same
//! partition on every platform.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `0..n` in a seeded random order.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng(seed));
    idx
}

/// Assigns `indices` to `k` folds. Fold sizes differ by at most one, and
/// each fold holds every class in proportion to its size: the count of class
/// `c` in fold `f` is the floor or ceiling of `n_c * |f| / n`. Members of a
/// class are shuffled before being handed out.
pub fn stratified_folds_of(
    indices: &[usize],
    labels: &[usize],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<usize>> {
    if k == 0 {
        return Vec::new();
    }
    let n = indices.len();
    let mut order = indices.to_vec();
    order.shuffle(rng);
    order.sort_by_key(|&i| labels[i]);
    let mut members: Vec<&[usize]> = Vec::new();
    let mut start = 0;
    while start < n {
        let class = labels[order[start]];
        let len = order[start..].iter().take_while(|&&i| labels[i] == class).count();
        members.push(&order[start..start + len]);
        start += len;
    }
    let sizes: Vec<usize> = (0..k).map(|f| n / k + usize::from(f < n % k)).collect();
    let counts = round_proportions(&members.iter().map(|m| m.len()).collect::<Vec<_>>(), &sizes);
    let mut folds = vec![Vec::new(); k];
    for (class, row) in members.iter().zip(&counts) {
        let mut rest = *class;
        for (fold, &take) in folds.iter_mut().zip(row) {
            fold.extend_from_slice(&rest[..take]);
            rest = &rest[take..];
        }
        // Empty unless the rounding came up short, which cannot happen.
        folds[k - 1].extend_from_slice(rest);
    }
    folds
}

/// Integer matrix with row sums `rows`, column sums `cols` (equal totals)
/// and every entry the floor or ceiling of `rows[r] * cols[c] / total`.
/// Entries start at the floor; the leftover units go to fractional cells
/// through augmenting paths, which always succeed because the exact
/// proportional matrix is a fractional solution.
fn round_proportions(rows: &[usize], cols: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = rows.iter().sum();
    let mut cell = vec![vec![0usize; cols.len()]; rows.len()];
    if total == 0 {
        return cell;
    }
    let mut grid = Rounding {
        fractional: vec![vec![false; cols.len()]; rows.len()],
        raised: vec![vec![false; cols.len()]; rows.len()],
        col_free: vec![0; cols.len()],
    };
    for (r, &nr) in rows.iter().enumerate() {
        for (c, &nc) in cols.iter().enumerate() {
            cell[r][c] = nr * nc / total;
            grid.fractional[r][c] = nr * nc % total != 0;
        }
    }
    for (c, &nc) in cols.iter().enumerate() {
        grid.col_free[c] = nc - cell.iter().map(|row| row[c]).sum::<usize>();
    }
    for (r, &nr) in rows.iter().enumerate() {
        let need = nr - cell[r].iter().sum::<usize>();
        for _ in 0..need {
            let mut seen = vec![false; cols.len()];
            if !grid.augment(r, &mut seen) {
                break;
            }
        }
    }
    for (row, raised) in cell.iter_mut().zip(&grid.raised) {
        for (v, &up) in row.iter_mut().zip(raised) {
            *v += usize::from(up);
        }
    }
    cell
}

struct Rounding {
    fractional: Vec<Vec<bool>>,
    /// Cells holding their ceiling.
    raised: Vec<Vec<bool>>,
    /// Units each column can still accept.
    col_free: Vec<usize>,
}

impl Rounding {
    /// Raises one more cell in row `r`, rerouting other rows if needed.
    fn augment(&mut self, r: usize, seen: &mut [bool]) -> bool {
        for c in 0..self.col_free.len() {
            if !self.fractional[r][c] || self.raised[r][c] || seen[c] {
                continue;
            }
            seen[c] = true;
            if self.col_free[c] > 0 {
                self.col_free[c] -= 1;
                self.raised[r][c] = true;
                return true;
            }
            for q in 0..self.raised.len() {
                if q != r && self.raised[q][c] {
                    self.raised[q][c] = false;
                    if self.augment(q, seen) {
                        self.raised[r][c] = true;
                        return true;
                    }
                    self.raised[q][c] = true;
                }
            }
        }
        false
    }
}

/// Stratified `k`-fold partition of `0..labels.len()`.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..labels.len()).collect();
    stratified_folds_of(&all, labels, k, &mut rng(seed))
}

/// Splits `indices` into (grow, holdout) with roughly `holdout_fraction` of
/// every class in the holdout part.
pub fn stratified_holdout(
    indices: &[usize],
    labels: &[usize],
    holdout_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut order = indices.to_vec();
    order.shuffle(rng);
    order.sort_by_key(|&i| labels[i]);
    let (mut grow, mut holdout) = (Vec::new(), Vec::new());
    let mut start = 0;
    while start < order.len() {
        let class = labels[order[start]];
        let end = start + order[start..].iter().take_while(|&&i| labels[i] == class).count();
        let n = end - start;
        let take = ((n as f64) * holdout_fraction).round() as usize;
        holdout.extend_from_slice(&order[start..start + take.min(n)]);
        grow.extend_from_slice(&order[start + take.min(n)..end]);
        start = end;
    }
    (grow, holdout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn balanced_folds_are_exact() {
        let labels: Vec<usize> = (0..100).map(|i| i % 5).collect();
        let folds = stratified_folds(&labels, 10, 7);
        for fold in &folds {
            assert_eq!(fold.len(), 10);
            for c in 0..5 {
                assert_eq!(fold.iter().filter(|&&i| labels[i] == c).count(), 2);
            }
        }
    }

    #[test]
    fn shuffle_is_seeded() {
        assert_eq!(shuffled_indices(50, 3), shuffled_indices(50, 3));
        assert_ne!(shuffled_indices(50, 3), shuffled_indices(50, 4));
    }

    proptest! {
        #[test]
        fn folds_partition_and_stratify(labels in prop::collection::vec(0usize..4, 1..120), k in 2usize..12, seed in any::<u64>()) {
            let folds = stratified_folds(&labels, k, seed);
            let mut all: Vec<usize> = folds.concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
            let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            for c in 0..4 {
                let n_c = labels.iter().filter(|&&l| l == c).count();
                for fold in &folds {
                    let got = fold.iter().filter(|&&i| labels[i] == c).count();
                    let share = n_c * fold.len();
                    prop_assert!(got == share / labels.len() || got == share.div_ceil(labels.len()));
                }
            }
        }

        #[test]
        fn holdout_partitions(labels in prop::collection::vec(0usize..3, 0..60), seed in any::<u64>()) {
            let idx: Vec<usize> = (0..labels.len()).collect();
            let (g, h) = stratified_holdout(&idx, &labels, 1.0 / 3.0, &mut rng(seed));
            let mut all = [g, h].concat();
            all.sort_unstable();
            prop_assert_eq!(all, idx);
        }
    }
}
