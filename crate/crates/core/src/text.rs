//! Tokenization, sentence splitting, stemming and syllable counting.
//!
//! Everything here is a pure function over `&str`; the other modules build on
//! these primitives for feature extraction and similarity.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use once_cell::race::OnceBox;

mod porter;

pub use porter::stem;

const STOPWORDS_TXT: &str = include_str!("../resources/stopwords.txt");

/// Abbreviations that never end a sentence (compared lowercase, with the dot).
const ABBREVIATIONS: &[&str] = &["e.g.", "i.e.", "etc.", "vs.", "dr.", "mr.", "mrs.", "ms."];

/// The built-in English stopword list, parsed from the bundled resource.
pub fn stopwords() -> &'static BTreeSet<&'static str> {
    static LIST: OnceBox<BTreeSet<&'static str>> = OnceBox::new();
    LIST.get_or_init(|| Box::new(parse_stopwords()))
}

fn parse_stopwords() -> BTreeSet<&'static str> {
    STOPWORDS_TXT
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

pub fn is_stopword(word: &str) -> bool {
    if word.chars().any(char::is_uppercase) {
        stopwords().contains(word.to_lowercase().as_str())
    } else {
        stopwords().contains(word)
    }
}

/// Characters that may appear inside a word token.
pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '-'
}

fn is_abbreviation(chunk: &str) -> bool {
    let trimmed = chunk.trim_start_matches(['(', '"', '\'']);
    if ABBREVIATIONS.contains(&trimmed.to_lowercase().as_str()) {
        return true;
    }
    // initials ("J.") and dotted acronyms ("u.s.", "J.R.R.")
    let letters = trimmed.chars().filter(|c| *c != '.').count();
    let dotted = trimmed.chars().enumerate().all(|(i, c)| if i % 2 == 0 { c.is_alphabetic() } else { c == '.' })
        && trimmed.chars().count().is_multiple_of(2);
    match letters {
        0 => false,
        1 => dotted && trimmed.starts_with(char::is_uppercase),
        _ => dotted,
    }
}

fn ends_sentence(chunk: &str) -> bool {
    let core = chunk.trim_end_matches(['"', '\'', ')', ']']);
    match core.chars().last() {
        Some('!' | '?') => true,
        Some('.') => !is_abbreviation(core),
        _ => false,
    }
}

/// Split markup-free text into sentences.
///
/// Boundaries are `.`, `!` or `?` followed by whitespace or end of input, and
/// every newline. Returned sentences are trimmed slices of `text`.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in text.split('\n') {
        let base = line_start;
        line_start += line.len() + 1;
        let mut start: Option<usize> = None;
        let mut end = 0;
        for chunk in line.split_whitespace() {
            let chunk_start = chunk.as_ptr() as usize - line.as_ptr() as usize;
            if start.is_none() {
                start = Some(chunk_start);
            }
            end = chunk_start + chunk.len();
            if ends_sentence(chunk) {
                if let Some(s) = start.take() {
                    out.push(&text[base + s..base + end]);
                }
            }
        }
        if let Some(s) = start {
            out.push(&text[base + s..base + end]);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenizeOptions {
    pub lowercase: bool,
    pub strip_punct: bool,
    pub drop_stopwords: bool,
    pub stem: bool,
}

impl TokenizeOptions {
    pub const NONE: Self = Self { lowercase: false, strip_punct: false, drop_stopwords: false, stem: false };
    pub const ALL: Self = Self { lowercase: true, strip_punct: true, drop_stopwords: true, stem: true };
    /// Lowercased word tokens, nothing removed.
    pub const WORDS: Self = Self { lowercase: true, strip_punct: true, drop_stopwords: false, stem: false };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub sentence_index: usize,
    pub kind: TokenKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn normalized(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.normalized.as_str())
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.kind == TokenKind::Word)
    }

    /// Tokens grouped by sentence index, skipping sentences left empty by filtering.
    pub fn sentences(&self) -> Vec<&[Token]> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.tokens.len() {
            if i == self.tokens.len() || self.tokens[i].sentence_index != self.tokens[start].sentence_index {
                out.push(&self.tokens[start..i]);
                start = i;
            }
        }
        out
    }
}

/// Raw lexical units of one sentence: word runs and single punctuation chars.
pub(crate) fn raw_tokens(sentence: &str) -> Vec<(&str, TokenKind)> {
    let mut out = Vec::new();
    let mut iter = sentence.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if c.is_whitespace() {
            continue;
        }
        if is_word_char(c) {
            let mut end = i + c.len_utf8();
            while let Some(&(j, d)) = iter.peek() {
                if !is_word_char(d) {
                    break;
                }
                end = j + d.len_utf8();
                iter.next();
            }
            let run = &sentence[i..end];
            if run.chars().any(char::is_alphanumeric) {
                out.push((run, TokenKind::Word));
            } else {
                for (k, p) in run.char_indices() {
                    out.push((&run[k..k + p.len_utf8()], TokenKind::Punct));
                }
            }
        } else {
            out.push((&sentence[i..i + c.len_utf8()], TokenKind::Punct));
        }
    }
    out
}

/// Tokenize text into words and punctuation, applying the options in order:
/// lowercase, strip punctuation, drop stopwords, stem.
pub fn tokenize(text: &str, options: TokenizeOptions) -> TokenStream {
    let mut tokens = Vec::new();
    for (sentence_index, sentence) in split_sentences(text).into_iter().enumerate() {
        for (surface, kind) in raw_tokens(sentence) {
            if options.strip_punct && kind == TokenKind::Punct {
                continue;
            }
            let mut normalized: String = if options.lowercase { surface.to_lowercase() } else { surface.into() };
            if kind == TokenKind::Word {
                if options.drop_stopwords && is_stopword(&normalized) {
                    continue;
                }
                if options.stem {
                    normalized = stem(&normalized);
                }
            }
            tokens.push(Token { surface: surface.into(), normalized, sentence_index, kind });
        }
    }
    TokenStream { tokens }
}

/// Number of word tokens in `text`.
pub fn word_count(text: &str) -> usize {
    text.split(|c: char| !is_word_char(c))
        .filter(|run| run.chars().any(char::is_alphanumeric))
        .count()
}

/// Heuristic syllable count: vowel groups (`aeiouy`), minus a silent final
/// `e` unless the word ends in consonant + `le`; never below 1.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0usize;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn norm(ts: &TokenStream) -> Vec<&str> {
        ts.normalized().collect()
    }

    #[test]
    fn sentences_basic() {
        assert_eq!(split_sentences("Hi. Go now!"), vec!["Hi.", "Go now!"]);
        assert_eq!(split_sentences("Visit e.g. this site."), vec!["Visit e.g. this site."]);
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("  \n\n ").is_empty());
    }

    #[test]
    fn sentences_newlines_and_initials() {
        assert_eq!(split_sentences("first line\nsecond line"), vec!["first line", "second line"]);
        assert_eq!(split_sentences("Ask J. Smith now. Done?"), vec!["Ask J. Smith now.", "Done?"]);
        assert_eq!(split_sentences("Is it 3.5 stars? Yes"), vec!["Is it 3.5 stars?", "Yes"]);
        assert_eq!(split_sentences("a, b. c d."), vec!["a, b.", "c d."]);
        assert_eq!(split_sentences("Made in the U.S. today"), vec!["Made in the U.S. today"]);
        assert_eq!(split_sentences("He said \"stop.\" Then left"), vec!["He said \"stop.\"", "Then left"]);
    }

    #[test]
    fn tokenize_all_options() {
        let ts = tokenize("Click the link!", TokenizeOptions::ALL);
        assert_eq!(norm(&ts), vec!["click", "link"]);
        let ts = tokenize("sign-up", TokenizeOptions::NONE);
        assert_eq!(norm(&ts), vec!["sign-up"]);
        let ts = tokenize("Running", TokenizeOptions { stem: true, lowercase: true, ..TokenizeOptions::NONE });
        assert_eq!(norm(&ts), vec!["run"]);
    }

    #[test]
    fn tokenize_keeps_punctuation_without_strip() {
        let ts = tokenize("Sign up, then go.", TokenizeOptions { lowercase: true, ..TokenizeOptions::NONE });
        assert_eq!(norm(&ts), vec!["sign", "up", ",", "then", "go", "."]);
        assert!(ts.tokens.iter().all(|t| t.sentence_index == 0));
    }

    #[test]
    fn sentence_indices_non_decreasing() {
        let ts = tokenize("One two. Three! Four", TokenizeOptions::WORDS);
        let idx: Vec<usize> = ts.tokens.iter().map(|t| t.sentence_index).collect();
        assert_eq!(idx, vec![0, 0, 1, 2]);
        assert_eq!(ts.sentences().len(), 3);
    }

    #[test]
    fn bare_hyphens_are_punctuation() {
        let ts = tokenize("a -- b", TokenizeOptions::NONE);
        assert_eq!(norm(&ts), vec!["a", "-", "-", "b"]);
        assert_eq!(word_count("a -- b, don't"), 3);
    }

    #[test]
    fn syllables() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("banana"), 3);
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("cake"), 1);
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("rhythm"), 1);
        assert_eq!(count_syllables("registration"), 4);
        assert_eq!(count_syllables("42"), 1);
    }

    #[test]
    fn stopword_lookup_is_case_insensitive() {
        assert!(is_stopword("The"));
        assert!(is_stopword("the"));
        assert!(!is_stopword("click"));
        assert!(stopwords().len() >= 150);
    }
}
