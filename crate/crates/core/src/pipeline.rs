//! Vectorizer plus classifier, fitted together on a text dataset.

use serde::{Deserialize, Serialize};

use crate::arff::Dataset;
use crate::classifiers::{self, ClassDistribution, ClassifierError, ClassifierSpec, Model};
use crate::data::NumericDataset;
use crate::features::{
    fit_vocabulary, texts_and_labels, transform_dataset, transform_documents, FeatureError, TokenizerSpec,
    VectorizerOptions, VocabularyModel,
};

/// How to turn text into features and which classifier to train on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub classifier: ClassifierSpec,
    pub tokenizer: TokenizerSpec,
    pub options: VectorizerOptions,
    /// Fit the vocabulary once on the whole dataset before any
    /// train/test partition instead of on each training part.
    #[serde(default)]
    pub leaky_vectorize: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

impl Pipeline {
    pub fn new(classifier: ClassifierSpec, tokenizer: TokenizerSpec, options: VectorizerOptions) -> Self {
        Self { classifier, tokenizer, options, leaky_vectorize: false }
    }

    pub fn with_leaky_vectorize(mut self, leaky: bool) -> Self {
        self.leaky_vectorize = leaky;
        self
    }

    /// Fits the vocabulary and the classifier on every instance of `data`.
    pub fn fit(&self, data: &Dataset) -> Result<TrainedModel, PipelineError> {
        let (docs, labels) = texts_and_labels(data)?;
        let all: Vec<usize> = (0..docs.len()).collect();
        self.fit_documents(&docs, &labels, &all, &class_name(data), data.class_labels())
    }

    /// Fits on the documents at `idx`.
    pub(crate) fn fit_documents(
        &self,
        docs: &[String],
        labels: &[usize],
        idx: &[usize],
        class_name: &str,
        class_labels: &[String],
    ) -> Result<TrainedModel, PipelineError> {
        let part_docs: Vec<&str> = idx.iter().map(|&i| docs[i].as_str()).collect();
        let part_labels: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();
        let vocabulary = fit_vocabulary(&part_docs, &self.tokenizer, &self.options)?;
        let train = transform_documents(&part_docs, &part_labels, &vocabulary, class_name, class_labels);
        let model = classifiers::train(&self.classifier, &train)?;
        Ok(TrainedModel { vocabulary, model })
    }

    /// Trains on already vectorized rows (the leaky order).
    pub(crate) fn fit_vectorized(
        &self,
        vectorized: &NumericDataset,
        vocabulary: &VocabularyModel,
        idx: &[usize],
    ) -> Result<TrainedModel, PipelineError> {
        let model = classifiers::train(&self.classifier, &vectorized.subset(idx))?;
        Ok(TrainedModel { vocabulary: vocabulary.clone(), model })
    }
}

pub(crate) fn class_name(data: &Dataset) -> String {
    data.class_attribute().map(|a| a.name.clone()).unwrap_or_default()
}

/// A fitted vocabulary and the model trained on its features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub vocabulary: VocabularyModel,
    pub model: Model,
}

impl TrainedModel {
    pub fn class_labels(&self) -> &[String] {
        &self.model.class_labels
    }

    /// Distribution for raw text. Text with no known token is classified
    /// from the zero vector.
    pub fn predict_text(&self, text: &str) -> ClassDistribution {
        self.model.predict_distribution(&self.vocabulary.transform(text))
    }

    /// Vectorizes a labelled text dataset with this vocabulary; its class
    /// labels must match the training labels.
    pub fn vectorize(&self, data: &Dataset) -> Result<NumericDataset, FeatureError> {
        transform_dataset(data, &self.vocabulary, &self.model.class_labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arff::{AttributeSpec, Instance, Value};
    use crate::classifiers::Algorithm;

    fn text_data(rows: &[(&str, &str)]) -> Dataset {
        let mut d = Dataset::new(
            "t",
            vec![AttributeSpec::string("text"), AttributeSpec::nominal("class", ["A", "B"])],
        );
        for (t, c) in rows {
            d.instances.push(Instance::new(vec![Value::Text(t.to_string()), Value::Text(c.to_string())]));
        }
        d
    }

    #[test]
    fn unseen_text_falls_back_to_prior() {
        let data = text_data(&[("le chat", "A"), ("le chien", "A"), ("la voiture", "B")]);
        let p = Pipeline::new(
            ClassifierSpec::new(Algorithm::NaiveBayesMultinomial),
            TokenizerSpec::word(),
            VectorizerOptions::default(),
        );
        let trained = p.fit(&data).unwrap();
        let d = trained.predict_text("zzz qqq");
        assert!((d.0[0] - 3.0 / 5.0).abs() < 1e-12);
        assert_eq!(trained.predict_text("chien").argmax(), 0);
    }
}
