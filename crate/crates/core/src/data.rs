//! Sparse numeric instances consumed by the classifiers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arff::{AttributeKind, AttributeSpec, Dataset, Instance, Value};

/// Sorted `(index, weight)` pairs. Indices are strictly increasing and no
/// stored weight is zero. `NaN` marks a missing value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from arbitrary pairs: sorts by index, sums duplicates
    /// and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|&(i, _)| i);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for (i, w) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += w,
                _ => entries.push((i, w)),
            }
        }
        entries.retain(|&(_, w)| w != 0.0);
        Self { entries }
    }

    /// Builds from a dense slice, skipping zeros.
    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(i, &w)| (i, w))
            .collect();
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn has_missing(&self) -> bool {
        self.entries.iter().any(|(_, w)| w.is_nan())
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for &(i, w) in &self.entries {
            if i < len {
                out[i] = w;
            }
        }
        out
    }

    /// Dot product with a dense vector; indices beyond `dense` contribute 0.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .filter_map(|&(i, w)| dense.get(i).map(|d| d * w))
            .sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        let mut sum = 0.0;
        while let (Some(&&(i, x)), Some(&&(j, y))) = (a.peek(), b.peek()) {
            match i.cmp(&j) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += x * y;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum()
    }
}

/// Kind of a predictor column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    Numeric,
    /// Stored as the value's index; index 0 is the implicit sparse default.
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
}

impl Feature {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: FeatureKind::Numeric }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("class attribute must be nominal")]
    ClassNotNominal,
    #[error("attribute '{0}' is a string attribute; vectorize text first")]
    StringAttribute(String),
    #[error("instance {0} has a missing or undeclared class value")]
    MissingClass(usize),
    #[error("instance {0} does not match the attribute count")]
    Arity(usize),
    #[error("attribute '{attribute}' of instance {instance} does not match its type")]
    TypeMismatch { instance: usize, attribute: String },
}

/// Labelled sparse rows over a fixed feature list. This is the numeric form
/// of a [`Dataset`] whose predictors are numeric or nominal.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericDataset {
    pub relation: String,
    pub features: Vec<Feature>,
    pub class_name: String,
    pub class_labels: Vec<String>,
    pub rows: Vec<SparseVector>,
    pub labels: Vec<usize>,
}

impl NumericDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> NumericDataset {
        NumericDataset {
            relation: self.relation.clone(),
            features: self.features.clone(),
            class_name: self.class_name.clone(),
            class_labels: self.class_labels.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Converts a dataset whose non-class attributes are numeric or nominal.
    pub fn from_dataset(data: &Dataset) -> Result<Self, DataError> {
        let class_attr = data.class_attribute().ok_or(DataError::ClassNotNominal)?;
        let class_labels = class_attr.nominal_values().ok_or(DataError::ClassNotNominal)?.to_vec();
        let mut features = Vec::new();
        let mut columns = Vec::new();
        for (j, attr) in data.attributes.iter().enumerate() {
            if j == data.class_index {
                continue;
            }
            let kind = match &attr.kind {
                AttributeKind::Numeric => FeatureKind::Numeric,
                AttributeKind::Nominal(v) => FeatureKind::Nominal(v.clone()),
                AttributeKind::String => return Err(DataError::StringAttribute(attr.name.clone())),
            };
            features.push(Feature { name: attr.name.clone(), kind });
            columns.push(j);
        }
        let mut rows = Vec::with_capacity(data.len());
        let mut labels = Vec::with_capacity(data.len());
        for (i, inst) in data.instances.iter().enumerate() {
            if inst.values.len() != data.attributes.len() {
                return Err(DataError::Arity(i));
            }
            labels.push(data.class_of(inst).ok_or(DataError::MissingClass(i))?);
            let mut entries = Vec::new();
            for (f, &j) in columns.iter().enumerate() {
                let attr = &data.attributes[j];
                let x = match (&inst.values[j], &attr.kind) {
                    (Value::Missing, _) => f64::NAN,
                    (Value::Number(x), AttributeKind::Numeric) => *x,
                    (Value::Text(t), AttributeKind::Nominal(_)) => attr
                        .index_of(t)
                        .ok_or_else(|| DataError::TypeMismatch {
                            instance: i,
                            attribute: attr.name.clone(),
                        })? as f64,
                    _ => {
                        return Err(DataError::TypeMismatch {
                            instance: i,
                            attribute: attr.name.clone(),
                        })
                    }
                };
                if x != 0.0 {
                    entries.push((f, x));
                }
            }
            rows.push(SparseVector { entries });
        }
        Ok(Self {
            relation: data.relation.clone(),
            features,
            class_name: class_attr.name.clone(),
            class_labels,
            rows,
            labels,
        })
    }

    /// Dense ARFF form with the class as last attribute; write it with
    /// `write_arff(.., true)` to get sparse rows.
    pub fn to_dataset(&self) -> Dataset {
        let mut attributes: Vec<AttributeSpec> = self
            .features
            .iter()
            .map(|f| AttributeSpec {
                name: f.name.clone(),
                kind: match &f.kind {
                    FeatureKind::Numeric => AttributeKind::Numeric,
                    FeatureKind::Nominal(v) => AttributeKind::Nominal(v.clone()),
                },
            })
            .collect();
        // A token may coincide with the class attribute's name.
        let mut class_name = self.class_name.clone();
        while self.features.iter().any(|f| f.name == class_name) {
            class_name.push('_');
        }
        attributes.push(AttributeSpec::nominal(class_name, self.class_labels.clone()));
        let mut data = Dataset::new(self.relation.clone(), attributes);
        for (row, &y) in self.rows.iter().zip(&self.labels) {
            let dense = row.to_dense(self.features.len());
            let mut values: Vec<Value> = dense
                .iter()
                .zip(&self.features)
                .map(|(&x, f)| {
                    if x.is_nan() {
                        Value::Missing
                    } else {
                        match &f.kind {
                            FeatureKind::Numeric => Value::Number(x),
                            FeatureKind::Nominal(v) => Value::Text(v[x as usize].clone()),
                        }
                    }
                })
                .collect();
            values.push(Value::Text(self.class_labels[y].clone()));
            data.instances.push(Instance::new(values));
        }
        data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arff::{parse_arff, write_arff};

    #[test]
    fn from_pairs_normalizes() {
        let v = SparseVector::from_pairs(vec![(3, 1.0), (1, 2.0), (3, 1.0), (2, 0.0)]);
        assert_eq!(v.entries(), &[(1, 2.0), (3, 2.0)]);
        assert_eq!(v.get(3), 2.0);
        assert_eq!(v.get(2), 0.0);
    }

    #[test]
    fn dot_products_agree() {
        let a = SparseVector::from_pairs(vec![(0, 1.0), (2, 3.0), (5, -1.0)]);
        let b = SparseVector::from_pairs(vec![(2, 2.0), (4, 7.0), (5, 2.0)]);
        assert_eq!(a.dot(&b), 4.0);
        assert_eq!(a.dot_dense(&b.to_dense(6)), 4.0);
        assert_eq!(a.squared_norm(), 11.0);
    }

    #[test]
    fn dataset_conversion_round_trips() {
        let text = "@relation r\n@attribute x numeric\n@attribute n {p,q}\n@attribute c {A,B}\n@data\n1.5,q,A\n?,p,B\n0,p,A\n";
        let d = parse_arff(text).unwrap();
        let nd = NumericDataset::from_dataset(&d).unwrap();
        assert_eq!(nd.labels, vec![0, 1, 0]);
        assert_eq!(nd.rows[0].entries(), &[(0, 1.5), (1, 1.0)]);
        assert!(nd.rows[1].has_missing());
        assert!(nd.rows[2].is_empty());
        assert_eq!(nd.class_counts(), vec![2, 1]);
        let back = nd.to_dataset();
        assert_eq!(parse_arff(&write_arff(&back, true)).unwrap(), d);
    }

    #[test]
    fn string_attributes_rejected() {
        let d = parse_arff("@relation r\n@attribute t string\n@attribute c {A}\n@data\nx,A\n").unwrap();
        assert_eq!(
            NumericDataset::from_dataset(&d).unwrap_err(),
            DataError::StringAttribute("t".into())
        );
    }
}
