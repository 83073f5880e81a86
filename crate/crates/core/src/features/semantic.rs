use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{FeatureError, Vocabulary};
use crate::corpus::MicroTask;
use crate::text::{is_stopword, tokenize, TokenKind, TokenizeOptions};

/// Word polarities, +1 or -1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    polarity: BTreeMap<String, i8>,
}

impl SentimentLexicon {
    /// Parse `word<TAB>+1|-1` lines; blank lines and `#` comments are skipped.
    pub fn parse(source: &str) -> Result<Self, FeatureError> {
        let mut polarity = BTreeMap::new();
        for (i, raw) in source.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |reason: String| FeatureError::Lexicon { line: i + 1, reason };
            let (word, value) = line.split_once('\t').ok_or_else(|| err("expected word<TAB>polarity".into()))?;
            let word = word.trim().to_lowercase();
            if word.is_empty() {
                return Err(err("empty word".into()));
            }
            let p = match value.trim() {
                "+1" | "1" => 1,
                "-1" => -1,
                other => return Err(err(format!("polarity `{other}` is not +1 or -1"))),
            };
            polarity.insert(word, p);
        }
        Ok(Self { polarity })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i8)>) -> Self {
        Self { polarity: pairs.into_iter().map(|(w, p)| (w.to_lowercase(), p.signum())).collect() }
    }

    /// Small default list for runs without a lexicon file.
    pub fn builtin() -> Self {
        Self::parse(include_str!("../../resources/sentiment.tsv")).expect("bundled lexicon parses")
    }

    pub fn get(&self, word: &str) -> Option<i8> {
        self.polarity.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.polarity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polarity.is_empty()
    }

    /// The same lexicon with every polarity negated.
    pub fn flipped(&self) -> Self {
        Self { polarity: self.polarity.iter().map(|(w, p)| (w.clone(), -p)).collect() }
    }
}

/// `(pos - neg) / max(1, pos + neg)` over lowercase word tokens.
pub fn sentiment(text: &str, lexicon: &SentimentLexicon) -> f64 {
    let (mut pos, mut neg) = (0usize, 0usize);
    for t in tokenize(text, TokenizeOptions::WORDS).tokens {
        match lexicon.get(&t.normalized) {
            Some(p) if p > 0 => pos += 1,
            Some(_) => neg += 1,
            None => {}
        }
    }
    (pos as f64 - neg as f64) / ((pos + neg).max(1) as f64)
}

/// Capitalized words that do not start their sentence and are not stopwords.
pub fn named_entity_count(text: &str) -> usize {
    let tokens = tokenize(text, TokenizeOptions::NONE);
    tokens
        .sentences()
        .into_iter()
        .flat_map(|s| s.iter().filter(|t| t.kind == TokenKind::Word).skip(1))
        .filter(|t| t.surface.chars().next().is_some_and(char::is_uppercase) && !is_stopword(&t.surface))
        .count()
}

pub fn semantic_columns(hosts: &Vocabulary) -> Vec<String> {
    let mut cols: Vec<String> = hosts.terms().iter().map(|h| format!("host={h}")).collect();
    cols.push("host_other".into());
    cols.push("named_entities".to_string());
    cols.push("sentiment".to_string());
    cols
}

/// Linked hosts (multi-hot plus "other"), named-entity count and sentiment
/// of the description.
pub fn semantic_features(task: &MicroTask, lexicon: &SentimentLexicon, hosts: &Vocabulary) -> Vec<f64> {
    let mut values = alloc::vec![0.0; hosts.len() + 1];
    for h in &task.structure.url_hosts {
        match hosts.get(h) {
            Some(i) => values[i] = 1.0,
            None => values[hosts.len()] = 1.0,
        }
    }
    values.push(named_entity_count(&task.description_text) as f64);
    values.push(sentiment(&task.description_text, lexicon));
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaskRecord;

    fn lex() -> SentimentLexicon {
        SentimentLexicon::from_pairs([("good", 1), ("bad", -1)])
    }

    #[test]
    fn sentiment_examples() {
        assert!((sentiment("good good bad", &lex()) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(sentiment("nothing here", &lex()), 0.0);
        assert_eq!(sentiment("Bad, BAD!", &lex()), -1.0);
        assert!((sentiment("good good bad", &lex().flipped()) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn named_entities() {
        assert_eq!(named_entity_count("Visit Facebook today"), 1);
        assert_eq!(named_entity_count("Go. Then use Google and The app"), 1);
        assert_eq!(named_entity_count(""), 0);
    }

    #[test]
    fn lexicon_parsing() {
        let l = SentimentLexicon::parse("# comment\ngood\t+1\nBad\t-1\r\n\n").unwrap();
        assert_eq!(l.get("good"), Some(1));
        assert_eq!(l.get("bad"), Some(-1));
        assert_eq!(l.len(), 2);
        assert_eq!(SentimentLexicon::parse("ok\t+2").unwrap_err(), FeatureError::Lexicon {
            line: 1,
            reason: "polarity `+2` is not +1 or -1".into()
        });
        assert!(matches!(SentimentLexicon::parse("x\n"), Err(FeatureError::Lexicon { line: 1, .. })));
        assert!(!SentimentLexicon::builtin().is_empty());
    }

    #[test]
    fn host_columns() {
        let html = r#"<a href="http://a.com">x</a> <a href="https://b.org/z">y</a> <a href="http://a.com/2">z</a>"#;
        let task = MicroTask::from_record(TaskRecord::new("t", "c", html)).unwrap().0;
        let hosts = Vocabulary::fit(["a.com", "c.net"]);
        let v = semantic_features(&task, &lex(), &hosts);
        assert_eq!(v.len(), semantic_columns(&hosts).len());
        assert_eq!(&v[..3], &[1.0, 0.0, 1.0]);
    }
}
