//! Versioned, self-describing model files (JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::TrainedModel;

pub const MODEL_FORMAT: &str = "dialectid-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// On-disk envelope. `trained` embeds the vocabulary (with its tokenizer
/// and vectorizer options) and the classifier spec, seed and payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub training_relation: String,
    pub training_instances: usize,
    pub trained: TrainedModel,
}

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("not a model file (format '{0}')")]
    WrongFormat(String),
    #[error("model file version {found} is not supported (expected {MODEL_FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
}

impl ModelFile {
    pub fn new(trained: TrainedModel, training_relation: impl Into<String>, training_instances: usize) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_FORMAT_VERSION,
            training_relation: training_relation.into(),
            training_instances,
            trained,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Parses and checks the format tag and version.
    pub fn from_json(text: &str) -> Result<Self, PersistError> {
        let header: serde_json::Value = serde_json::from_str(text)?;
        let format = header.get("format").and_then(|v| v.as_str()).unwrap_or("").to_string();
        if format != MODEL_FORMAT {
            return Err(PersistError::WrongFormat(format));
        }
        let version = header.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if version != MODEL_FORMAT_VERSION {
            return Err(PersistError::UnsupportedVersion { found: version });
        }
        Ok(serde_json::from_value(header)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), PersistError> {
        std::fs::write(path, self.to_json())
            .map_err(|source| PersistError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Self, PersistError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PersistError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }
}
