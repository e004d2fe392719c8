//! Bag-of-tokens vectorization of a text attribute.
//!
//! Text is split by one of three tokenizers (delimiter-separated words, word
//! n-grams, character n-grams), a vocabulary is fitted on training documents
//! only, and each document becomes a [`SparseVector`] of token weights:
//! raw counts, optionally `ln(1 + f)` (TF) and optionally `f · ln(N / df)`
//! (IDF).

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arff::{AttributeKind, Dataset, Value};
use crate::data::{Feature, NumericDataset, SparseVector};

/// Space, tab, newline and `.,;:'"()?!`.
pub const DEFAULT_DELIMITERS: &str = " \t\n.,;:'\"()?!";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TokenizerSpec {
    Word { delimiters: String },
    WordNgram { min: usize, max: usize, delimiters: String },
    CharNgram { min: usize, max: usize },
}

impl TokenizerSpec {
    pub fn word() -> Self {
        TokenizerSpec::Word { delimiters: DEFAULT_DELIMITERS.to_string() }
    }

    pub fn word_ngram(min: usize, max: usize) -> Self {
        TokenizerSpec::WordNgram { min, max, delimiters: DEFAULT_DELIMITERS.to_string() }
    }

    pub fn char_ngram(min: usize, max: usize) -> Self {
        TokenizerSpec::CharNgram { min, max }
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        match *self {
            TokenizerSpec::Word { .. } => Ok(()),
            TokenizerSpec::WordNgram { min, max, .. } | TokenizerSpec::CharNgram { min, max } => {
                if min >= 1 && min <= max {
                    Ok(())
                } else {
                    Err(FeatureError::InvalidNgramRange { min, max })
                }
            }
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        match self {
            TokenizerSpec::Word { delimiters } => word_tokenize(text, delimiters),
            TokenizerSpec::WordNgram { min, max, delimiters } => {
                word_ngrams(text, *min, *max, delimiters)
            }
            TokenizerSpec::CharNgram { min, max } => char_ngrams(text, *min, *max),
        }
    }

    /// Short human-readable name, e.g. `char(3,3)`.
    pub fn describe(&self) -> String {
        match self {
            TokenizerSpec::Word { .. } => "word".to_string(),
            TokenizerSpec::WordNgram { min, max, .. } => format!("word-ngram({min},{max})"),
            TokenizerSpec::CharNgram { min, max } => format!("char({min},{max})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorizerOptions {
    pub tf_transform: bool,
    pub idf_transform: bool,
    /// Raw counts when true, presence (1) when false.
    pub output_counts: bool,
    pub lowercase: bool,
    pub min_doc_freq: usize,
}

impl Default for VectorizerOptions {
    fn default() -> Self {
        Self {
            tf_transform: false,
            idf_transform: false,
            output_counts: true,
            lowercase: true,
            min_doc_freq: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("no documents to fit")]
    NoDocuments,
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("invalid n-gram range: min {min}, max {max} (need 1 <= min <= max)")]
    InvalidNgramRange { min: usize, max: usize },
    #[error("min_doc_freq must be at least 1")]
    InvalidMinDocFreq,
    #[error("dataset needs exactly one string attribute and a nominal class")]
    BadTextDataset,
    #[error("instance {0} has a missing or undeclared class value")]
    MissingClass(usize),
    #[error("class labels {found:?} do not match the training labels {expected:?}")]
    ClassMismatch { expected: Vec<String>, found: Vec<String> },
}

/// Splits on any delimiter character and drops empty tokens.
pub fn word_tokenize(text: &str, delimiters: &str) -> Vec<String> {
    text.split(|c: char| delimiters.contains(c))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// All contiguous character substrings of each length in `min..=max`,
/// grouped by length.
pub fn char_ngrams(text: &str, min: usize, max: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for n in min.max(1)..=max {
        if chars.len() < n {
            continue;
        }
        out.extend(chars.windows(n).map(|w| w.iter().collect::<String>()));
    }
    out
}

/// Word tokens joined by single spaces into n-grams for `n` in `min..=max`.
pub fn word_ngrams(text: &str, min: usize, max: usize, delimiters: &str) -> Vec<String> {
    let words = word_tokenize(text, delimiters);
    let mut out = Vec::new();
    for n in min.max(1)..=max {
        if words.len() < n {
            continue;
        }
        out.extend(words.windows(n).map(|w| w.join(" ")));
    }
    out
}

/// Fitted token vocabulary. Token `i` of [`Self::tokens`] is feature `i`;
/// tokens are sorted, so lookups are binary searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabularyModel {
    pub tokens: Vec<String>,
    pub doc_freq: Vec<usize>,
    pub num_docs: usize,
    pub tokenizer: TokenizerSpec,
    pub options: VectorizerOptions,
}

impl VocabularyModel {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.binary_search_by(|t| t.as_str().cmp(token)).ok()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index_of(token).is_some()
    }

    fn prepare<'a>(&self, doc: &'a str) -> std::borrow::Cow<'a, str> {
        if self.options.lowercase {
            std::borrow::Cow::Owned(doc.to_lowercase())
        } else {
            std::borrow::Cow::Borrowed(doc)
        }
    }

    /// Weights of `doc` over this vocabulary; unknown tokens are ignored.
    pub fn transform(&self, doc: &str) -> SparseVector {
        let text = self.prepare(doc);
        let mut indices: Vec<usize> = self
            .tokenizer
            .tokenize(&text)
            .iter()
            .filter_map(|t| self.index_of(t))
            .collect();
        indices.sort_unstable();
        let mut pairs = Vec::new();
        let mut k = 0;
        while k < indices.len() {
            let index = indices[k];
            let run = indices[k..].iter().take_while(|&&i| i == index).count();
            k += run;
            let mut f = if self.options.output_counts { run as f64 } else { 1.0 };
            if self.options.tf_transform {
                f = f.ln_1p();
            }
            if self.options.idf_transform {
                f *= (self.num_docs as f64 / self.doc_freq[index] as f64).ln();
            }
            if f != 0.0 {
                pairs.push((index, f));
            }
        }
        SparseVector::from_pairs(pairs)
    }
}

/// Fits a vocabulary of all tokens whose document frequency reaches
/// `options.min_doc_freq`.
pub fn fit_vocabulary<S: AsRef<str> + Sync>(
    docs: &[S],
    tokenizer: &TokenizerSpec,
    options: &VectorizerOptions,
) -> Result<VocabularyModel, FeatureError> {
    tokenizer.validate()?;
    if options.min_doc_freq == 0 {
        return Err(FeatureError::InvalidMinDocFreq);
    }
    if docs.is_empty() {
        return Err(FeatureError::NoDocuments);
    }
    let per_doc: Vec<HashSet<String>> = docs
        .par_iter()
        .map(|d| {
            let d = d.as_ref();
            let text = if options.lowercase { d.to_lowercase() } else { d.to_string() };
            tokenizer.tokenize(&text).into_iter().collect()
        })
        .collect();
    let mut freq: BTreeMap<String, usize> = BTreeMap::new();
    for set in per_doc {
        for token in set {
            *freq.entry(token).or_insert(0) += 1;
        }
    }
    let (tokens, doc_freq): (Vec<String>, Vec<usize>) =
        freq.into_iter().filter(|&(_, df)| df >= options.min_doc_freq).unzip();
    if tokens.is_empty() {
        return Err(FeatureError::EmptyVocabulary);
    }
    Ok(VocabularyModel {
        tokens,
        doc_freq,
        num_docs: docs.len(),
        tokenizer: tokenizer.clone(),
        options: options.clone(),
    })
}

/// Text column and class indices of a text dataset.
fn text_layout(data: &Dataset) -> Result<(usize, usize), FeatureError> {
    let class = data.class_index;
    if !data.class_attribute().is_some_and(|a| a.is_nominal()) || data.attributes.len() != 2 {
        return Err(FeatureError::BadTextDataset);
    }
    let text = 1 - class;
    if data.attributes[text].kind != AttributeKind::String {
        return Err(FeatureError::BadTextDataset);
    }
    Ok((text, class))
}

/// Texts and class indices of a text dataset; missing text counts as empty.
pub fn texts_and_labels(data: &Dataset) -> Result<(Vec<String>, Vec<usize>), FeatureError> {
    let (text, _) = text_layout(data)?;
    let mut docs = Vec::with_capacity(data.len());
    let mut labels = Vec::with_capacity(data.len());
    for (i, inst) in data.instances.iter().enumerate() {
        labels.push(data.class_of(inst).ok_or(FeatureError::MissingClass(i))?);
        docs.push(inst.values.get(text).and_then(Value::as_text).unwrap_or("").to_string());
    }
    Ok((docs, labels))
}

/// Transforms labelled documents with a fitted vocabulary.
pub fn transform_documents<S: AsRef<str> + Sync>(
    docs: &[S],
    labels: &[usize],
    vocab: &VocabularyModel,
    class_name: &str,
    class_labels: &[String],
) -> NumericDataset {
    NumericDataset {
        relation: "vectorized".to_string(),
        features: vocab.tokens.iter().map(Feature::numeric).collect(),
        class_name: class_name.to_string(),
        class_labels: class_labels.to_vec(),
        rows: docs.par_iter().map(|d| vocab.transform(d.as_ref())).collect(),
        labels: labels.to_vec(),
    }
}

/// Fits a vocabulary on `data` and returns the vectorized dataset (one
/// numeric feature per token, same instance order) with the vocabulary.
pub fn vectorize_dataset(
    data: &Dataset,
    tokenizer: &TokenizerSpec,
    options: &VectorizerOptions,
) -> Result<(NumericDataset, VocabularyModel), FeatureError> {
    let (docs, labels) = texts_and_labels(data)?;
    let vocab = fit_vocabulary(&docs, tokenizer, options)?;
    let class = data.class_attribute().map(|a| a.name.clone()).unwrap_or_default();
    let mut out = transform_documents(&docs, &labels, &vocab, &class, data.class_labels());
    out.relation = data.relation.clone();
    Ok((out, vocab))
}

/// Vectorizes a held-out text dataset with a training vocabulary. The class
/// labels must match `class_labels` exactly.
pub fn transform_dataset(
    data: &Dataset,
    vocab: &VocabularyModel,
    class_labels: &[String],
) -> Result<NumericDataset, FeatureError> {
    if data.class_labels() != class_labels {
        return Err(FeatureError::ClassMismatch {
            expected: class_labels.to_vec(),
            found: data.class_labels().to_vec(),
        });
    }
    let (docs, labels) = texts_and_labels(data)?;
    let class = data.class_attribute().map(|a| a.name.clone()).unwrap_or_default();
    let mut out = transform_documents(&docs, &labels, vocab, &class, class_labels);
    out.relation = data.relation.clone();
    Ok(out)
}
