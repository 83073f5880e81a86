//! Verb phrases and the required-action similarity between tasks.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::wordnet::{Pos, WordMeasure, WordNetGraph};
use crate::corpus::MicroTask;
use crate::text::{is_stopword, tokenize, TokenKind, TokenizeOptions};

/// Tokens after which a verb starts a new phrase.
pub const TRIGGER_PRECEDERS: [&str; 6] = ["to", "and", "or", "then", ",", "please"];

/// Word tokens per phrase, trigger included.
pub const MAX_PHRASE_WORDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbPhrase {
    pub verb_lemma: String,
    pub argument_lemmas: Vec<String>,
    pub surface: String,
}

/// Phrases of `text`. A word triggers a phrase when it has a verb lemma and
/// either opens its sentence or follows one of [`TRIGGER_PRECEDERS`]. The
/// phrase runs to the next trigger or sentence end, at most
/// [`MAX_PHRASE_WORDS`] words; its arguments are the non-stopwords in it
/// that have a noun lemma.
pub fn extract_verb_phrases_from_text(text: &str, wn: &WordNetGraph) -> Vec<VerbPhrase> {
    let options = TokenizeOptions { lowercase: true, ..TokenizeOptions::NONE };
    let stream = tokenize(text, options);
    let mut out = Vec::new();
    for sentence in stream.sentences() {
        // (token position, verb lemma) of every trigger
        let mut triggers: Vec<(usize, String)> = Vec::new();
        let mut seen_word = false;
        for (i, tok) in sentence.iter().enumerate() {
            if tok.kind != TokenKind::Word {
                continue;
            }
            let opens = !seen_word;
            seen_word = true;
            let after_preceder = i > 0 && TRIGGER_PRECEDERS.contains(&sentence[i - 1].normalized.as_str());
            if opens || after_preceder {
                if let Some(lemma) = wn.lemmatize(&tok.normalized, Pos::Verb) {
                    triggers.push((i, lemma));
                }
            }
        }
        for (t, (start, verb)) in triggers.iter().enumerate() {
            let end = triggers.get(t + 1).map_or(sentence.len(), |n| n.0);
            let words: Vec<&str> = sentence[*start..end]
                .iter()
                .filter(|tok| tok.kind == TokenKind::Word)
                .take(MAX_PHRASE_WORDS)
                .map(|tok| tok.normalized.as_str())
                .collect();
            let mut argument_lemmas: Vec<String> = Vec::new();
            for w in &words[1..] {
                if is_stopword(w) {
                    continue;
                }
                if let Some(l) = wn.lemmatize(w, Pos::Noun) {
                    if !argument_lemmas.contains(&l) {
                        argument_lemmas.push(l);
                    }
                }
            }
            out.push(VerbPhrase { verb_lemma: verb.clone(), argument_lemmas, surface: words.join(" ") });
        }
    }
    out
}

/// Phrases of a task's title and description.
pub fn extract_verb_phrases(task: &MicroTask, wn: &WordNetGraph) -> Vec<VerbPhrase> {
    extract_verb_phrases_from_text(&task.full_text(), wn)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RequiredActionConfig {
    /// Weight of the verb term; arguments get the rest. Phrases without
    /// arguments are compared on the verb alone.
    pub verb_weight: f64,
    pub measure: WordMeasure,
}

impl Default for RequiredActionConfig {
    fn default() -> Self {
        Self { verb_weight: 0.7, measure: WordMeasure::Path }
    }
}

/// Phrase similarity with word similarity supplied by `sim`.
pub fn phrase_similarity_with<F>(p: &VerbPhrase, q: &VerbPhrase, verb_weight: f64, sim: &F) -> f64
where
    F: Fn(&str, &str, Pos) -> f64,
{
    let verb = sim(&p.verb_lemma, &q.verb_lemma, Pos::Verb);
    if p.argument_lemmas.is_empty() || q.argument_lemmas.is_empty() {
        return verb;
    }
    let mut nouns: f64 = 0.0;
    for a in &p.argument_lemmas {
        for b in &q.argument_lemmas {
            nouns = nouns.max(sim(a, b, Pos::Noun));
        }
    }
    (verb_weight * verb + (1.0 - verb_weight) * nouns).min(1.0)
}

fn directed<F>(a: &[VerbPhrase], b: &[VerbPhrase], verb_weight: f64, sim: &F) -> f64
where
    F: Fn(&str, &str, Pos) -> f64,
{
    let total: f64 = a
        .iter()
        .map(|p| b.iter().map(|q| phrase_similarity_with(p, q, verb_weight, sim)).fold(0.0, f64::max))
        .sum();
    total / a.len() as f64
}

/// Mean best-match phrase similarity, averaged over both directions. Either
/// side empty gives 0.
pub fn required_action_similarity_with<F>(a: &[VerbPhrase], b: &[VerbPhrase], verb_weight: f64, sim: &F) -> f64
where
    F: Fn(&str, &str, Pos) -> f64,
{
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let s = (directed(a, b, verb_weight, sim) + directed(b, a, verb_weight, sim)) / 2.0;
    s.clamp(0.0, 1.0)
}

pub fn phrase_similarity(p: &VerbPhrase, q: &VerbPhrase, wn: &WordNetGraph, config: &RequiredActionConfig) -> f64 {
    phrase_similarity_with(p, q, config.verb_weight, &|x: &str, y: &str, pos| wn.similarity(x, y, pos, config.measure))
}

pub fn required_action_similarity(
    a: &[VerbPhrase],
    b: &[VerbPhrase],
    wn: &WordNetGraph,
    config: &RequiredActionConfig,
) -> f64 {
    required_action_similarity_with(a, b, config.verb_weight, &|x: &str, y: &str, pos| {
        wn.similarity(x, y, pos, config.measure)
    })
}
