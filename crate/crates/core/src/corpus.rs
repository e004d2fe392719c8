//! Cleaning raw concordance exports into a labelled text dataset.
//!
//! Per label the stages run in this order: keep `<p>…</p>` lines, strip the
//! tags, keep complete sentences, normalize the character set, then drop
//! duplicates and short sentences. Duplicates are detected on the normalized
//! text so that the output never holds two equal sentences for one label.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arff::{AttributeKind, AttributeSpec, Dataset, Instance, Value};

/// Labels used by default, in class order.
pub const DEFAULT_LABELS: [&str; 5] = ["MC", "BE", "FR", "CA", "CH"];

const OPEN_TAG: &str = "<p>";
const CLOSE_TAG: &str = "</p>";

/// Accented and ligature letters accepted in addition to ASCII letters.
const FRENCH_LETTERS: &str = "àâäçéèêëîïôöùûüÿœæÀÂÄÇÉÈÊËÎÏÔÖÙÛÜŸŒÆ";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllowedChars {
    /// ASCII letters, French accented letters and ligatures, digits, space,
    /// apostrophe, comma, hyphen and the configured terminators.
    French,
    /// Exactly these characters plus space and the terminators.
    Custom(String),
}

impl AllowedChars {
    fn contains(&self, c: char, terminators: &[char]) -> bool {
        if c == ' ' || terminators.contains(&c) {
            return true;
        }
        match self {
            AllowedChars::French => {
                c.is_ascii_alphanumeric()
                    || matches!(c, '\'' | ',' | '-')
                    || FRENCH_LETTERS.contains(c)
            }
            AllowedChars::Custom(set) => set.contains(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrepConfig {
    pub label: String,
    pub min_tokens: usize,
    pub terminators: Vec<char>,
    pub allowed_chars: AllowedChars,
}

impl PrepConfig {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            min_tokens: 3,
            terminators: vec!['.', '!', '?'],
            allowed_chars: AllowedChars::French,
        }
    }

    pub fn with_min_tokens(mut self, min_tokens: usize) -> Self {
        self.min_tokens = min_tokens;
        self
    }

    fn check(&self) -> Result<(), CorpusError> {
        if self.min_tokens == 0 {
            return Err(CorpusError::InvalidConfig(format!(
                "label '{}': min_tokens must be at least 1",
                self.label
            )));
        }
        if self.terminators.is_empty() {
            return Err(CorpusError::InvalidConfig(format!(
                "label '{}': terminator set is empty",
                self.label
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSentence {
    pub text: String,
    pub label: String,
}

/// Raw lines for one label together with that label's cleaning settings.
#[derive(Debug, Clone)]
pub struct LabelSource {
    pub config: PrepConfig,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("no input sources given")]
    NoSources,
    #[error("label '{0}' given more than once")]
    DuplicateLabel(String),
    #[error("no sentence survived cleaning for label '{0}'")]
    EmptyLabel(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dataset has no string attribute")]
    NoTextAttribute,
}

/// Keeps lines holding both an opening and a closing paragraph tag.
pub fn extract_paragraph_lines<S: AsRef<str>>(lines: &[S]) -> Vec<String> {
    lines
        .iter()
        .map(AsRef::as_ref)
        .filter(|l| l.contains(OPEN_TAG) && l.contains(CLOSE_TAG))
        .map(str::to_owned)
        .collect()
}

/// Removes paragraph tags until none are left, then trims.
pub fn strip_tags(line: &str) -> String {
    let mut s = line.to_string();
    while s.contains(OPEN_TAG) || s.contains(CLOSE_TAG) {
        s = s.replace(OPEN_TAG, "").replace(CLOSE_TAG, "");
    }
    s.trim().to_string()
}

fn is_complete(sentence: &str, cfg: &PrepConfig) -> bool {
    sentence
        .trim_end()
        .chars()
        .next_back()
        .is_some_and(|c| cfg.terminators.contains(&c))
}

pub fn filter_complete_sentences<S: AsRef<str>>(sentences: &[S], cfg: &PrepConfig) -> Vec<String> {
    sentences
        .iter()
        .map(AsRef::as_ref)
        .filter(|s| is_complete(s, cfg))
        .map(str::to_owned)
        .collect()
}

fn token_count(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Drops exact repeats (first occurrence wins) and sentences with fewer than
/// `min_tokens` whitespace tokens. Survivors keep their order.
pub fn dedupe_and_length_filter<S: AsRef<str>>(sentences: &[S], cfg: &PrepConfig) -> Vec<String> {
    let mut seen = HashSet::new();
    sentences
        .iter()
        .map(AsRef::as_ref)
        .filter(|s| seen.insert(*s))
        .filter(|s| token_count(s) >= cfg.min_tokens)
        .map(str::to_owned)
        .collect()
}

/// Deletes characters outside the allowed class and collapses whitespace.
pub fn normalize_french(sentence: &str, cfg: &PrepConfig) -> String {
    let kept: String = sentence
        .chars()
        .map(|c| if c.is_whitespace() { ' ' } else { c })
        .filter(|&c| cfg.allowed_chars.contains(c, &cfg.terminators))
        .collect();
    kept.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Full cleaning pipeline for one label.
pub fn clean_lines<S: AsRef<str>>(lines: &[S], cfg: &PrepConfig) -> Vec<LabeledSentence> {
    let paragraphs = extract_paragraph_lines(lines);
    let stripped: Vec<String> = paragraphs.iter().map(|l| strip_tags(l)).collect();
    let complete = filter_complete_sentences(&stripped, cfg);
    let normalized: Vec<String> = complete
        .iter()
        .map(|s| normalize_french(s, cfg))
        .filter(|s| is_complete(s, cfg))
        .collect();
    dedupe_and_length_filter(&normalized, cfg)
        .into_iter()
        .map(|text| LabeledSentence { text, label: cfg.label.clone() })
        .collect()
}

/// Cleans every source and assembles a `text: string, class: nominal`
/// dataset. Labels keep the order of `sources`.
pub fn build_dataset(sources: &[LabelSource]) -> Result<Dataset, CorpusError> {
    if sources.is_empty() {
        return Err(CorpusError::NoSources);
    }
    let mut labels: Vec<String> = Vec::new();
    for src in sources {
        src.config.check()?;
        if labels.contains(&src.config.label) {
            return Err(CorpusError::DuplicateLabel(src.config.label.clone()));
        }
        labels.push(src.config.label.clone());
    }

    let cleaned: Vec<Vec<LabeledSentence>> =
        sources.par_iter().map(|src| clean_lines(&src.lines, &src.config)).collect();

    let mut data = Dataset::new(
        "dialects",
        vec![AttributeSpec::string("text"), AttributeSpec::nominal("class", labels)],
    );
    for (src, sentences) in sources.iter().zip(cleaned) {
        if sentences.is_empty() {
            return Err(CorpusError::EmptyLabel(src.config.label.clone()));
        }
        data.instances.extend(sentences.into_iter().map(|s| {
            Instance::new(vec![Value::Text(s.text), Value::Text(s.label)])
        }));
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: usize,
    /// Instance count per declared class label, in class order.
    pub per_label: Vec<(String, usize)>,
    pub max_tokens: usize,
    pub mean_tokens: f64,
    /// Population standard deviation.
    pub stddev_tokens: f64,
}

/// Label counts and sentence-length statistics over the first string attribute.
pub fn corpus_stats(data: &Dataset) -> Result<CorpusStats, CorpusError> {
    let text_index = data
        .attributes
        .iter()
        .position(|a| a.kind == AttributeKind::String)
        .ok_or(CorpusError::NoTextAttribute)?;
    let labels = data.class_labels();
    let mut counts = vec![0usize; labels.len()];
    let mut lengths = Vec::with_capacity(data.len());
    for inst in &data.instances {
        if let Some(c) = data.class_of(inst) {
            counts[c] += 1;
        }
        if let Some(text) = inst.values.get(text_index).and_then(Value::as_text) {
            lengths.push(token_count(text));
        }
    }
    let n = lengths.len() as f64;
    let (mean, stddev) = if lengths.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = lengths.iter().sum::<usize>() as f64 / n;
        let var = lengths.iter().map(|&l| (l as f64 - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    };
    Ok(CorpusStats {
        total: data.len(),
        per_label: labels.iter().cloned().zip(counts).collect(),
        max_tokens: lengths.iter().copied().max().unwrap_or(0),
        mean_tokens: mean,
        stddev_tokens: stddev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> PrepConfig {
        PrepConfig::new("FR")
    }

    #[test]
    fn paragraph_lines_need_both_tags() {
        assert_eq!(extract_paragraph_lines(&["<p>Bonjour.</p>", "noise"]), vec!["<p>Bonjour.</p>"]);
        assert!(extract_paragraph_lines::<&str>(&[]).is_empty());
        assert!(extract_paragraph_lines(&["<p>unclosed"]).is_empty());
        assert!(extract_paragraph_lines(&["closed only</p>"]).is_empty());
    }

    #[test]
    fn tags_stripped() {
        assert_eq!(strip_tags("<p>Bonjour.</p>"), "Bonjour.");
        assert_eq!(strip_tags("<p> Salut ! </p>"), "Salut !");
        assert_eq!(strip_tags("<p><p>x.</p></p>"), "x.");
        assert_eq!(strip_tags("<<p>p>y.</p>"), "y.");
    }

    #[test]
    fn complete_sentences() {
        let c = cfg();
        assert_eq!(filter_complete_sentences(&["Oui.", "Non"], &c), vec!["Oui."]);
        assert_eq!(filter_complete_sentences(&["Quoi ?"], &c), vec!["Quoi ?"]);
        assert_eq!(filter_complete_sentences(&["a.", "b!", "c?"], &c).len(), 3);
        assert_eq!(filter_complete_sentences(&["fin.  "], &c).len(), 1);
    }

    #[test]
    fn dedupe_and_length() {
        let c = cfg();
        assert_eq!(dedupe_and_length_filter(&["a b c.", "a b c."], &c), vec!["a b c."]);
        assert!(dedupe_and_length_filter(&["oui."], &c).is_empty());
        assert_eq!(
            dedupe_and_length_filter(&["x y z.", "a b.", "p q r.", "x y z."], &c),
            vec!["x y z.", "p q r."]
        );
    }

    #[test]
    fn normalization() {
        let c = cfg();
        assert_eq!(normalize_french("Café №5 ouvert.", &c), "Café 5 ouvert.");
        assert_eq!(normalize_french("déjà-vu, évidemment !", &c), "déjà-vu, évidemment !");
        assert_eq!(normalize_french("a   b.", &c), "a b.");
        assert_eq!(normalize_french("ŒUVRE « là » aujourd'hui\t!", &c), "ŒUVRE là aujourd'hui !");
    }

    #[test]
    fn build_two_labels() {
        let sources = vec![
            LabelSource { config: PrepConfig::new("MC"), lines: vec!["<p>Il fait beau ici.</p>".into()] },
            LabelSource { config: PrepConfig::new("FR"), lines: vec!["<p>On mange du pain.</p>".into()] },
        ];
        let d = build_dataset(&sources).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.class_labels(), ["MC", "FR"]);
        assert_eq!(d.class_index, 1);
        assert!(crate::arff::validate(&d).is_empty());
    }

    #[test]
    fn empty_label_is_named() {
        let sources = vec![
            LabelSource { config: PrepConfig::new("MC"), lines: vec!["<p>Il fait beau ici.</p>".into()] },
            LabelSource { config: PrepConfig::new("BE"), lines: vec!["<p>trop court.</p>".into(), "rien".into()] },
        ];
        assert_eq!(build_dataset(&sources).unwrap_err(), CorpusError::EmptyLabel("BE".into()));
        assert_eq!(build_dataset(&[]).unwrap_err(), CorpusError::NoSources);
    }

    #[test]
    fn dedupe_happens_after_normalization() {
        let lines = vec!["<p>Le café est bon.</p>".to_string(), "<p>Le café « est » bon.</p>".to_string()];
        assert_eq!(clean_lines(&lines, &cfg()).len(), 1);
    }

    #[test]
    fn stats_use_population_stddev() {
        let mut d = Dataset::new(
            "r",
            vec![AttributeSpec::string("text"), AttributeSpec::nominal("class", ["A", "B"])],
        );
        for (t, c) in [("a b c", "A"), ("a b c d e", "B")] {
            d.instances.push(Instance::new(vec![Value::Text(t.into()), Value::Text(c.into())]));
        }
        let s = corpus_stats(&d).unwrap();
        assert_eq!(s.max_tokens, 5);
        assert_eq!(s.mean_tokens, 4.0);
        assert_eq!(s.stddev_tokens, 1.0);
        assert_eq!(s.per_label, vec![("A".to_string(), 1), ("B".to_string(), 1)]);

        d.instances.truncate(1);
        assert_eq!(corpus_stats(&d).unwrap().stddev_tokens, 0.0);
    }

    fn raw_line() -> impl Strategy<Value = String> {
        let word = "[a-zéèàçœ«»№$#]{1,7}";
        (prop::collection::vec(word, 1..8), prop::sample::select(vec![".", "!", "?", "", " ."]), any::<u8>())
            .prop_map(|(words, end, tag)| {
                let body = format!("{}{}", words.join(" "), end);
                match tag % 4 {
                    0 => body,
                    1 => format!("<p>{body}"),
                    _ => format!("<p>{body}</p>"),
                }
            })
    }

    proptest! {
        #[test]
        fn pipeline_is_idempotent(lines in prop::collection::vec(raw_line(), 0..30)) {
            let c = cfg();
            let once = clean_lines(&lines, &c);
            let rewrapped: Vec<String> = once.iter().map(|s| format!("<p>{}</p>", s.text)).collect();
            let twice = clean_lines(&rewrapped, &c);
            prop_assert_eq!(&once, &twice);
            let mut seen = HashSet::new();
            for s in &once {
                prop_assert!(!s.text.is_empty());
                prop_assert!(is_complete(&s.text, &c));
                prop_assert!(s.text.chars().all(|ch| c.allowed_chars.contains(ch, &c.terminators)));
                prop_assert!(seen.insert(s.text.clone()));
            }
        }

        #[test]
        fn stats_match_brute_force(lens in prop::collection::vec(1usize..40, 1..30)) {
            let mut d = Dataset::new(
                "r",
                vec![AttributeSpec::string("text"), AttributeSpec::nominal("class", ["A"])],
            );
            for &l in &lens {
                let text = vec!["w"; l].join(" ");
                d.instances.push(Instance::new(vec![Value::Text(text), Value::Text("A".into())]));
            }
            let s = corpus_stats(&d).unwrap();
            let n = lens.len() as f64;
            let mean = lens.iter().map(|&l| l as f64).sum::<f64>() / n;
            let var = lens.iter().map(|&l| (l as f64 - mean) * (l as f64 - mean)).sum::<f64>() / n;
            prop_assert!((s.mean_tokens - mean).abs() < 1e-12);
            prop_assert!((s.stddev_tokens - var.sqrt()).abs() < 1e-12);
            prop_assert_eq!(s.max_tokens, *lens.iter().max().unwrap());
            prop_assert_eq!(s.per_label[0].1, lens.len());
        }
    }
}
