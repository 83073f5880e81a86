use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::corpus::MicroTask;
use crate::math::{mean, ratio};
use crate::text::{count_syllables, split_sentences, tokenize, TokenStream, TokenizeOptions};

/// Number of leading tokens the type-token ratio looks at.
pub const LEXICAL_WINDOW: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StructuralFeatures {
    pub word_count: f64,
    pub bullet_count: f64,
    pub avg_words_per_sentence: f64,
    pub avg_commas_per_sentence: f64,
    pub avg_chars_per_word: f64,
    pub avg_paragraph_length: f64,
    pub avg_line_length: f64,
    pub gunning_fog: f64,
    pub lexical_diversity: f64,
}

impl StructuralFeatures {
    pub const NAMES: [&'static str; 9] = [
        "word_count",
        "bullet_count",
        "avg_words_per_sentence",
        "avg_commas_per_sentence",
        "avg_chars_per_word",
        "avg_paragraph_length",
        "avg_line_length",
        "gunning_fog",
        "lexical_diversity",
    ];

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.word_count,
            self.bullet_count,
            self.avg_words_per_sentence,
            self.avg_commas_per_sentence,
            self.avg_chars_per_word,
            self.avg_paragraph_length,
            self.avg_line_length,
            self.gunning_fog,
            self.lexical_diversity,
        ]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }
}

/// Gunning Fog index: `0.4 * (words/sentences + 100 * complex/words)`,
/// 0 when there are no words or no sentences.
pub fn gunning_fog(words: usize, sentences: usize, complex_words: usize) -> f64 {
    if words == 0 || sentences == 0 {
        return 0.0;
    }
    let w = words as f64;
    0.4 * (w / sentences as f64 + 100.0 * complex_words as f64 / w)
}

/// Type-token ratio over the first [`LEXICAL_WINDOW`] normalized tokens.
pub fn lexical_diversity(tokens: &TokenStream) -> f64 {
    let window: Vec<&str> = tokens.normalized().take(LEXICAL_WINDOW).collect();
    if window.is_empty() {
        return 0.0;
    }
    let types: BTreeSet<&str> = window.iter().copied().collect();
    types.len() as f64 / window.len() as f64
}

/// The nine structural features of the description (title excluded).
/// Averages over an empty denominator are 0.
pub fn structural_features(task: &MicroTask) -> StructuralFeatures {
    let text = task.description_text.as_str();
    let tokens = tokenize(text, TokenizeOptions::NONE);
    let words: Vec<&str> = tokens.words().map(|t| t.surface.as_str()).collect();
    let sentences = split_sentences(text).len();
    let commas = text.chars().filter(|&c| c == ',').count();
    let chars: usize = words.iter().map(|w| w.chars().count()).sum();
    let complex = words.iter().filter(|w| count_syllables(w) >= 3).count();
    let normalized = tokenize(text, TokenizeOptions::WORDS);

    let n_words = words.len() as f64;
    let n_sent = sentences as f64;
    let s = &task.structure;
    StructuralFeatures {
        word_count: n_words,
        bullet_count: s.bullet_count as f64,
        avg_words_per_sentence: ratio(n_words, n_sent),
        avg_commas_per_sentence: ratio(commas as f64, n_sent),
        avg_chars_per_word: ratio(chars as f64, n_words),
        avg_paragraph_length: mean(s.paragraph_lengths.iter().map(|&v| v as f64)),
        avg_line_length: mean(s.line_lengths.iter().map(|&v| v as f64)),
        gunning_fog: gunning_fog(words.len(), sentences, complex),
        lexical_diversity: lexical_diversity(&normalized),
    }
}
