//! Synthetic five-dialect corpus for demonstrations and end-to-end tests.
//!
//! Sentences mix a shared lexicon with marker words specific to each label,
//! so every label carries its own character trigrams. Raw lines wrap the
//! sentences in paragraph tags among markup, fragments, duplicates and
//! stray symbols that the cleaning pipeline removes.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::arff::Dataset;
use crate::corpus::{build_dataset, LabelSource, PrepConfig, DEFAULT_LABELS};
use crate::sampling::rng;

const LEXICON: [&str; 72] = [
    "le", "la", "les", "un", "une", "des", "et", "mais", "avec", "pour", "dans", "sur", "chez", "sans", "très",
    "bien", "beaucoup", "toujours", "jamais", "encore", "déjà", "demain", "hier", "maison", "ville", "rue",
    "travail", "école", "marché", "voiture", "train", "soleil", "pluie", "temps", "famille", "ami", "amie",
    "enfant", "repas", "café", "pain", "fromage", "soir", "matin", "semaine", "week-end", "aller", "venir",
    "manger", "parler", "voir", "faire", "prendre", "acheter", "trouver", "penser", "grand", "petit", "beau",
    "nouveau", "vieux", "content", "fatigué", "nous", "vous", "ils", "elle", "on", "je", "tu", "c'est", "il",
];

fn markers(label_index: usize) -> &'static [&'static str] {
    const MARKERS: [&[&str]; 5] = [
        &["wakha", "bezzaf", "khouya", "hchouma", "mezyan", "zwina"],
        &["septante", "nonante", "guindaille", "drache", "zwanze", "kot"],
        &["kiffer", "chelou", "relou", "bagnole", "ouf", "bouffer"],
        &["pantoute", "icitte", "magasiner", "dépanneur", "tabarnak", "blonde"],
        &["huitante", "natel", "panosse", "poutser", "foehn", "cheni"],
    ];
    MARKERS[label_index % MARKERS.len()]
}

const STRAY: [char; 5] = ['*', '#', '«', '»', '@'];
const TERMINATORS: [char; 3] = ['.', '!', '?'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoConfig {
    pub labels: Vec<String>,
    pub sentences_per_label: usize,
    pub seed: u64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self { labels: DEFAULT_LABELS.iter().map(|s| s.to_string()).collect(), sentences_per_label: 400, seed: 1 }
    }
}

fn sentence<R: Rng>(r: &mut R, label_index: usize) -> String {
    let len = r.random_range(5..=12);
    let mut words: Vec<&str> = (0..len).map(|_| *LEXICON.choose(r).expect("lexicon")).collect();
    let own = markers(label_index);
    for _ in 0..r.random_range(1..=2) {
        let at = r.random_range(0..=words.len());
        words.insert(at, own.choose(r).expect("markers"));
    }
    let mut text = words.join(" ");
    if let Some(first) = text.chars().next() {
        text.replace_range(..first.len_utf8(), &first.to_uppercase().to_string());
    }
    text.push(*TERMINATORS.choose(r).expect("terminators"));
    text
}

/// Clean sentences for each label: `sentences_per_label` distinct ones.
pub fn demo_sentences(cfg: &DemoConfig) -> Vec<(String, Vec<String>)> {
    cfg.labels
        .iter()
        .enumerate()
        .map(|(li, label)| {
            let mut r = rng(cfg.seed.wrapping_mul(31).wrapping_add(li as u64));
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(cfg.sentences_per_label);
            while out.len() < cfg.sentences_per_label {
                let s = sentence(&mut r, li);
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
            (label.clone(), out)
        })
        .collect()
}

fn garble<R: Rng>(r: &mut R, s: &str) -> String {
    let mut out = String::new();
    let last = s.chars().count().saturating_sub(1);
    for (i, c) in s.chars().enumerate() {
        out.push(c);
        // The terminator must stay last.
        if i + 1 < last && r.random_bool(0.03) {
            out.push(*STRAY.choose(r).expect("stray"));
        }
    }
    out
}

/// Raw export lines for each label. Cleaning them with default settings
/// yields exactly [`demo_sentences`].
pub fn demo_raw_sources(cfg: &DemoConfig) -> Vec<(String, Vec<String>)> {
    demo_sentences(cfg)
        .into_iter()
        .enumerate()
        .map(|(li, (label, sentences))| {
            let mut r = rng(cfg.seed.wrapping_mul(131).wrapping_add(li as u64));
            let mut lines = vec![format!("<doc id=\"{label}-0\">")];
            for (i, s) in sentences.iter().enumerate() {
                lines.push(format!("<p>{}</p>", garble(&mut r, s)));
                match i % 7 {
                    1 => lines.push(format!("<p>{}</p>", sentences[i / 2])),
                    3 => lines.push(format!("<p>fragment sans fin numéro {i}</p>")),
                    4 => lines.push("<p>Oui.</p>".to_string()),
                    6 => lines.push(format!("</doc>\n<doc id=\"{label}-{i}\">")),
                    _ => {}
                }
            }
            lines.push("</doc>".to_string());
            (label, lines.join("\n").lines().map(str::to_owned).collect())
        })
        .collect()
}

/// The cleaned demo corpus as a `text, class` dataset.
pub fn demo_dataset(cfg: &DemoConfig) -> Dataset {
    let sources: Vec<LabelSource> = demo_raw_sources(cfg)
        .into_iter()
        .map(|(label, lines)| LabelSource { config: PrepConfig::new(label), lines })
        .collect();
    build_dataset(&sources).expect("demo corpus cleans to a non-empty dataset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::texts_and_labels;

    #[test]
    fn cleaning_recovers_exactly_the_sentences() {
        let cfg = DemoConfig { sentences_per_label: 60, ..DemoConfig::default() };
        let data = demo_dataset(&cfg);
        assert_eq!(data.len(), 300);
        let (docs, labels) = texts_and_labels(&data).unwrap();
        let expected: Vec<(usize, String)> = demo_sentences(&cfg)
            .into_iter()
            .enumerate()
            .flat_map(|(li, (_, s))| s.into_iter().map(move |t| (li, t)))
            .collect();
        let got: Vec<(usize, String)> = labels.into_iter().zip(docs).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn corpus_is_seeded() {
        let cfg = DemoConfig { sentences_per_label: 20, ..DemoConfig::default() };
        assert_eq!(demo_raw_sources(&cfg), demo_raw_sources(&cfg));
        let other = DemoConfig { seed: 2, ..cfg.clone() };
        assert_ne!(demo_sentences(&cfg), demo_sentences(&other));
    }
}
