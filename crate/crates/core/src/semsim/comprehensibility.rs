//! Comprehensibility vectors: the structural features plus the share of
//! unusual words, compared after z-scoring.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::MicroTask;
use crate::features::structural_features;
use crate::math::{ratio, sqrt};
use crate::text::{tokenize, TokenizeOptions};

pub const COMPREHENSIBILITY_DIM: usize = 10;

/// A token is unusual only if at most this many tasks contain it.
pub const UNUSUAL_MAX_DF: usize = 5;

pub const STD_FLOOR: f64 = 1e-9;

/// Set of known words, compared lowercase.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wordlist(BTreeSet<String>);

impl Wordlist {
    /// One word per line; blank lines are skipped.
    pub fn parse(text: &str) -> Self {
        Self(text.lines().map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty()).collect())
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        Self(words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn insert(&mut self, word: &str) {
        self.0.insert(word.to_lowercase());
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn description_tokens(task: &MicroTask) -> Vec<String> {
    tokenize(&task.description_text, TokenizeOptions::WORDS).tokens.into_iter().map(|t| t.normalized).collect()
}

/// Number of tasks whose description contains each lowercase word token.
pub fn document_frequencies<'a>(tasks: impl IntoIterator<Item = &'a MicroTask>) -> BTreeMap<String, usize> {
    let mut df = BTreeMap::new();
    for task in tasks {
        let seen: BTreeSet<String> = description_tokens(task).into_iter().collect();
        for t in seen {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    df
}

/// Share of description tokens that are rare in the corpus and missing from
/// the wordlist; 0 for an empty description.
pub fn unusual_word_ratio(task: &MicroTask, df: &BTreeMap<String, usize>, wordlist: &Wordlist) -> f64 {
    let tokens = description_tokens(task);
    let unusual = tokens
        .iter()
        .filter(|t| df.get(t.as_str()).copied().unwrap_or(0) <= UNUSUAL_MAX_DF && !wordlist.contains(t))
        .count();
    ratio(unusual as f64, tokens.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComprehensibilityVector(pub [f64; COMPREHENSIBILITY_DIM]);

impl ComprehensibilityVector {
    pub const NAMES: [&'static str; COMPREHENSIBILITY_DIM] = [
        "word_count",
        "bullet_count",
        "avg_words_per_sentence",
        "avg_commas_per_sentence",
        "avg_chars_per_word",
        "avg_paragraph_length",
        "avg_line_length",
        "gunning_fog",
        "lexical_diversity",
        "unusual_word_ratio",
    ];

    pub fn of(task: &MicroTask, df: &BTreeMap<String, usize>, wordlist: &Wordlist) -> Self {
        let s = structural_features(task).to_array();
        let mut v = [0.0; COMPREHENSIBILITY_DIM];
        v[..9].copy_from_slice(&s);
        v[9] = unusual_word_ratio(task, df, wordlist);
        Self(v)
    }
}

/// Per-feature mean and standard deviation, the latter floored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub mean: [f64; COMPREHENSIBILITY_DIM],
    pub std: [f64; COMPREHENSIBILITY_DIM],
}

impl FeatureStats {
    pub fn fit(vectors: &[ComprehensibilityVector]) -> Self {
        let n = vectors.len().max(1) as f64;
        let mut mean = [0.0; COMPREHENSIBILITY_DIM];
        let mut std = [0.0; COMPREHENSIBILITY_DIM];
        for v in vectors {
            mean.iter_mut().zip(&v.0).for_each(|(m, x)| *m += x / n);
        }
        for v in vectors {
            for j in 0..COMPREHENSIBILITY_DIM {
                let d = v.0[j] - mean[j];
                std[j] += d * d / n;
            }
        }
        std.iter_mut().for_each(|s| *s = sqrt(*s).max(STD_FLOOR));
        Self { mean, std }
    }
}

/// `1 / (1 + d)` with `d` the Euclidean distance of the z-scored vectors
/// divided by the square root of the dimension.
pub fn comprehensibility_similarity(u: &ComprehensibilityVector, v: &ComprehensibilityVector, stats: &FeatureStats) -> f64 {
    let mut sq = 0.0;
    for j in 0..COMPREHENSIBILITY_DIM {
        let zu = (u.0[j] - stats.mean[j]) / stats.std[j];
        let zv = (v.0[j] - stats.mean[j]) / stats.std[j];
        sq += (zu - zv) * (zu - zv);
    }
    let d = sqrt(sq) / sqrt(COMPREHENSIBILITY_DIM as f64);
    1.0 / (1.0 + d)
}

/// Names for column headers and reports.
pub fn comprehensibility_columns() -> Vec<String> {
    ComprehensibilityVector::NAMES.iter().map(|s| s.to_string()).collect()
}
