//! Turning command-line flags into pipeline components.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::Value as Json;

use dialectid::classifiers::{Algorithm, ClassifierSpec};
use dialectid::features::{TokenizerSpec, VectorizerOptions};
use dialectid::pipeline::Pipeline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenizerKind {
    Word,
    WordNgram,
    Char,
}

/// Feature extraction flags shared by `experiment` and `train`.
#[derive(Debug, Clone, Args)]
pub struct FeatureArgs {
    /// Token unit.
    #[arg(long, value_enum, default_value_t = TokenizerKind::Word)]
    pub tokenizer: TokenizerKind,
    /// Smallest n-gram size (default 1 for word n-grams, 3 for characters).
    #[arg(long)]
    pub min: Option<usize>,
    /// Largest n-gram size (default 3).
    #[arg(long)]
    pub max: Option<usize>,
    /// Replace each count f by ln(1 + f).
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub tf: bool,
    /// Weight each token by ln(N / df).
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub idf: bool,
    /// Emit 0/1 presence instead of counts.
    #[arg(long)]
    pub presence: bool,
    /// Keep the original letter case.
    #[arg(long)]
    pub keep_case: bool,
    /// Drop tokens seen in fewer documents than this.
    #[arg(long, default_value_t = 1)]
    pub min_doc_freq: usize,
}

impl FeatureArgs {
    pub fn tokenizer(&self) -> Result<TokenizerSpec> {
        let spec = match self.tokenizer {
            TokenizerKind::Word => {
                if self.min.is_some() || self.max.is_some() {
                    bail!("--min/--max apply only to --tokenizer word-ngram or char");
                }
                TokenizerSpec::word()
            }
            TokenizerKind::WordNgram => TokenizerSpec::word_ngram(self.min.unwrap_or(1), self.max.unwrap_or(3)),
            TokenizerKind::Char => {
                let min = self.min.unwrap_or(3);
                TokenizerSpec::char_ngram(min, self.max.unwrap_or(min.max(3)))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn options(&self) -> VectorizerOptions {
        VectorizerOptions {
            tf_transform: self.tf,
            idf_transform: self.idf,
            output_counts: !self.presence,
            lowercase: !self.keep_case,
            min_doc_freq: self.min_doc_freq,
        }
    }
}

/// Parses a feature cell such as `word`, `word-ngram:1:3` or `char:3:3`.
pub fn parse_feature(text: &str) -> Result<TokenizerSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let bounds = |parts: &[&str]| -> Result<(usize, usize)> {
        match parts {
            [min, max] => Ok((
                min.parse().with_context(|| format!("bad n-gram size '{min}' in '{text}'"))?,
                max.parse().with_context(|| format!("bad n-gram size '{max}' in '{text}'"))?,
            )),
            _ => bail!("feature '{text}' needs the form KIND:MIN:MAX"),
        }
    };
    let spec = match parts[0] {
        "word" if parts.len() == 1 => TokenizerSpec::word(),
        "word-ngram" => {
            let (min, max) = bounds(&parts[1..])?;
            TokenizerSpec::word_ngram(min, max)
        }
        "char" => {
            let (min, max) = bounds(&parts[1..])?;
            TokenizerSpec::char_ngram(min, max)
        }
        _ => bail!("unknown feature '{text}' (expected word, word-ngram:MIN:MAX or char:MIN:MAX)"),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn unknown_classifier(name: &str) -> anyhow::Error {
    anyhow!("unknown classifier '{name}'; valid names: {}", Algorithm::NAMES.join(", "))
}

/// Accepts any name [`Algorithm::from_name`] knows, so a typo is reported
/// as a usage error.
pub fn classifier_name(name: &str) -> Result<String, String> {
    match Algorithm::from_name(name) {
        Some(_) => Ok(name.to_string()),
        None => Err(unknown_classifier(name).to_string()),
    }
}

/// Algorithm by name with `key=value` hyperparameter overrides. Values are
/// read as JSON when possible, so `c=0.5` and `pruned=false` keep their types.
pub fn algorithm(name: &str, overrides: &[String]) -> Result<Algorithm> {
    let base = Algorithm::from_name(name).ok_or_else(|| unknown_classifier(name))?;
    if overrides.is_empty() {
        return Ok(base);
    }
    let mut json = serde_json::to_value(&base)?;
    let fields = json.as_object_mut().ok_or_else(|| anyhow!("classifier settings are not a record"))?;
    for item in overrides {
        let (key, raw) = item.split_once('=').ok_or_else(|| anyhow!("override '{item}' must look like key=value"))?;
        if key == "name" || !fields.contains_key(key) {
            let mut known: Vec<&str> = fields.keys().map(String::as_str).filter(|k| *k != "name").collect();
            known.sort_unstable();
            let known = if known.is_empty() { "none".to_string() } else { known.join(", ") };
            bail!("{} has no parameter '{key}'; parameters: {known}", base.name());
        }
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Json::String(raw.to_string()));
        fields.insert(key.to_string(), value);
    }
    serde_json::from_value(json).with_context(|| format!("invalid parameters for {}", base.name()))
}

/// Classifier name, overrides and seed.
#[derive(Debug, Clone, Args)]
pub struct ClassifierArgs {
    /// Classifier name, e.g. smo, c45 (j48), ripper (jrip), rep_tree, naive_bayes.
    #[arg(long, default_value = "smo", value_parser = classifier_name)]
    pub classifier: String,
    /// Hyperparameter override, repeatable (e.g. -P c=0.5).
    #[arg(short = 'P', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Seed for every random choice.
    #[arg(long, env = "DIALECTID_SEED", default_value_t = 1)]
    pub seed: u64,
}

impl ClassifierArgs {
    pub fn spec(&self) -> Result<ClassifierSpec> {
        let spec = ClassifierSpec::new(algorithm(&self.classifier, &self.params)?).with_seed(self.seed);
        spec.validate()?;
        Ok(spec)
    }
}

pub fn pipeline(classifier: &ClassifierArgs, features: &FeatureArgs, leaky: bool) -> Result<Pipeline> {
    Ok(Pipeline::new(classifier.spec()?, features.tokenizer()?, features.options()).with_leaky_vectorize(leaky))
}
