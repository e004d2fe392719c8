//! Majority-class baseline.

use serde::{Deserialize, Serialize};

use super::ClassDistribution;
use crate::data::NumericDataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRModel {
    pub counts: Vec<usize>,
}

pub fn train_zero_r(data: &NumericDataset) -> ZeroRModel {
    ZeroRModel { counts: data.class_counts() }
}

impl ZeroRModel {
    /// Class relative frequencies, whatever the input.
    pub fn distribution(&self) -> ClassDistribution {
        ClassDistribution::from_counts(&self.counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }
}
