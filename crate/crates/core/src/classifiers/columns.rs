//! Per-attribute value/class tallies over a subset of sparse rows.

use crate::data::SparseVector;

/// Distinct values of one attribute (ascending) and, for each value, the
/// class counts of the rows holding it. `counts[v * k + c]`.
pub(crate) struct Column {
    pub feature: usize,
    pub values: Vec<f64>,
    pub counts: Vec<usize>,
}

pub(crate) fn class_counts(labels: &[usize], idx: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for &i in idx {
        counts[labels[i]] += 1;
    }
    counts
}

/// Tallies every attribute that is non-zero in at least one row of `idx`;
/// the implicit zeros of sparse rows are included as the value `0`.
/// Missing (`NaN`) entries are skipped.
pub(crate) fn scan_columns(
    rows: &[SparseVector],
    labels: &[usize],
    idx: &[usize],
    k: usize,
) -> Vec<Column> {
    let total = class_counts(labels, idx, k);
    let mut triples: Vec<(usize, f64, usize)> = idx
        .iter()
        .flat_map(|&i| rows[i].iter().filter(|(_, v)| !v.is_nan()).map(move |(j, v)| (j, v, labels[i])))
        .collect();
    triples.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut out = Vec::new();
    let mut start = 0;
    while start < triples.len() {
        let feature = triples[start].0;
        let end = start + triples[start..].iter().take_while(|t| t.0 == feature).count();
        let mut values = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut nonzero = vec![0usize; k];
        let mut zero_inserted = false;
        let zero_slot = |values: &mut Vec<f64>, counts: &mut Vec<usize>, nonzero: &[usize]| {
            let zeros: Vec<usize> = total.iter().zip(nonzero).map(|(t, n)| t - n).collect();
            if zeros.iter().any(|&z| z > 0) {
                values.push(0.0);
                counts.extend(zeros);
            }
        };
        // First pass gathers the non-zero tallies so the zero group can be
        // sized before it is placed.
        for t in &triples[start..end] {
            nonzero[t.2] += 1;
        }
        for t in &triples[start..end] {
            if !zero_inserted && t.1 > 0.0 {
                zero_slot(&mut values, &mut counts, &nonzero);
                zero_inserted = true;
            }
            if values.last() != Some(&t.1) {
                values.push(t.1);
                counts.extend(std::iter::repeat_n(0, k));
            }
            let v = values.len() - 1;
            counts[v * k + t.2] += 1;
        }
        if !zero_inserted {
            zero_slot(&mut values, &mut counts, &nonzero);
        }
        out.push(Column { feature, values, counts });
        start = end;
    }
    out
}
