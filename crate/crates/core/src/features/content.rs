use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::corpus::MicroTask;
use crate::math::{ln, sqrt};
use crate::text::{tokenize, TokenizeOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentConfig {
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub min_df: usize,
    pub max_features: usize,
}

impl Default for ContentConfig {
    fn default() -> Self {
        Self { ngram_min: 1, ngram_max: 2, min_df: 2, max_features: 10_000 }
    }
}

/// Fitted tf-idf vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "ContentModelRepr", into = "ContentModelRepr")]
pub struct ContentModel {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    config: ContentConfig,
    index: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct ContentModelRepr {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    config: ContentConfig,
}

impl From<ContentModelRepr> for ContentModel {
    fn from(r: ContentModelRepr) -> Self {
        let index = r.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms: r.terms, doc_freq: r.doc_freq, n_docs: r.n_docs, config: r.config, index }
    }
}

impl From<ContentModel> for ContentModelRepr {
    fn from(m: ContentModel) -> Self {
        Self { terms: m.terms, doc_freq: m.doc_freq, n_docs: m.n_docs, config: m.config }
    }
}

impl ContentModel {
    /// Vocabulary terms in column order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn doc_freq(&self, term: &str) -> Option<usize> {
        self.column(term).map(|i| self.doc_freq[i])
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn config(&self) -> &ContentConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn idf(&self, column: usize) -> f64 {
        ln(self.n_docs as f64 / self.doc_freq[column] as f64)
    }

    /// tf-idf weights before L2 normalization, sorted by column.
    pub fn raw_weights(&self, task: &MicroTask) -> Vec<(usize, f64)> {
        let mut tf: BTreeMap<usize, usize> = BTreeMap::new();
        for gram in document_ngrams(task, &self.config) {
            if let Some(col) = self.column(&gram) {
                *tf.entry(col).or_insert(0) += 1;
            }
        }
        tf.into_iter().map(|(col, n)| (col, n as f64 * self.idf(col))).collect()
    }
}

/// Sparse vector: sorted `(column, value)` pairs over `dim` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    pub dim: usize,
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn get(&self, column: usize) -> f64 {
        self.entries.binary_search_by_key(&column, |e| e.0).map_or(0.0, |i| self.entries[i].1)
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.entries.iter().map(|(_, v)| v * v).sum())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

/// Word n-grams of title + description: lowercase, punctuation stripped,
/// stopwords dropped, stemmed. N-grams do not cross sentence boundaries.
fn document_ngrams(task: &MicroTask, config: &ContentConfig) -> Vec<String> {
    let tokens = tokenize(&task.full_text(), TokenizeOptions::ALL);
    let mut grams = Vec::new();
    for sentence in tokens.sentences() {
        let words: Vec<&str> = sentence.iter().map(|t| t.normalized.as_str()).collect();
        for n in config.ngram_min.max(1)..=config.ngram_max {
            for w in words.windows(n) {
                grams.push(w.join(" "));
            }
        }
    }
    grams
}

/// Fit the n-gram vocabulary on training tasks only.
///
/// Keeps n-grams with document frequency >= `min_df`, then the
/// `max_features` most frequent, ties broken lexicographically.
pub fn fit_content_model(training: &[&MicroTask], config: &ContentConfig) -> Result<ContentModel, FeatureError> {
    if training.is_empty() {
        return Err(FeatureError::EmptyTrainingSet);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for task in training {
        let unique: BTreeSet<String> = document_ngrams(task, config).into_iter().collect();
        for g in unique {
            *df.entry(g).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(String, usize)> = df.into_iter().filter(|(_, n)| *n >= config.min_df).collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    kept.truncate(config.max_features);
    let (terms, doc_freq): (Vec<String>, Vec<usize>) = kept.into_iter().unzip();
    Ok(ContentModelRepr { terms, doc_freq, n_docs: training.len(), config: config.clone() }.into())
}

/// L2-normalized tf-idf vector: `tf * ln(N / df)` per vocabulary term.
/// Out-of-vocabulary terms are ignored; an all-zero vector stays zero.
pub fn content_vector(model: &ContentModel, task: &MicroTask) -> SparseVector {
    let mut entries = model.raw_weights(task);
    let norm = sqrt(entries.iter().map(|(_, v)| v * v).sum());
    if norm > 0.0 {
        for e in &mut entries {
            e.1 /= norm;
        }
    }
    entries.retain(|e| e.1 != 0.0);
    SparseVector { dim: model.len(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaskRecord;
    use alloc::vec;

    fn task(id: &str, text: &str) -> MicroTask {
        MicroTask::from_record(TaskRecord::new(id, "c", text)).unwrap().0
    }

    fn unigrams(min_df: usize, max_features: usize) -> ContentConfig {
        ContentConfig { ngram_min: 1, ngram_max: 1, min_df, max_features }
    }

    #[test]
    fn df_threshold() {
        let docs = [task("1", "click banner"), task("2", "click video"), task("3", "watch video")];
        let refs: Vec<&MicroTask> = docs.iter().collect();
        let m = fit_content_model(&refs, &unigrams(2, 100)).unwrap();
        assert_eq!(m.doc_freq("click"), Some(2));
        assert_eq!(m.doc_freq("banner"), None);
        assert_eq!(m.terms(), &["click", "video"]);
    }

    #[test]
    fn truncation_by_df_then_lexicographic() {
        let docs = [task("1", "x y"), task("2", "x y"), task("3", "x zz")];
        let refs: Vec<&MicroTask> = docs.iter().collect();
        let m = fit_content_model(&refs, &ContentConfig { min_df: 1, max_features: 1, ..unigrams(1, 1) }).unwrap();
        assert_eq!(m.terms(), &["x"]);
        let m = fit_content_model(&refs, &ContentConfig { min_df: 1, max_features: 3, ..unigrams(1, 3) }).unwrap();
        assert_eq!(m.terms(), &["x", "y", "zz"]);
    }

    #[test]
    fn empty_training_set() {
        assert_eq!(fit_content_model(&[], &ContentConfig::default()).unwrap_err(), FeatureError::EmptyTrainingSet);
    }

    #[test]
    fn tf_idf_hand_values() {
        let docs = [task("1", "click banner"), task("2", "click video"), task("3", "watch video")];
        let refs: Vec<&MicroTask> = docs.iter().collect();
        let m = fit_content_model(&refs, &unigrams(2, 100)).unwrap();
        let raw = m.raw_weights(&docs[0]);
        assert_eq!(raw.len(), 1);
        assert!((raw[0].1 - 1.5f64.ln()).abs() < 1e-12);
        let v = content_vector(&m, &docs[0]);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert_eq!(v.get(m.column("video").unwrap()), 0.0);
    }

    #[test]
    fn oov_only_document_is_zero() {
        let docs = [task("1", "click"), task("2", "click")];
        let refs: Vec<&MicroTask> = docs.iter().collect();
        let m = fit_content_model(&refs, &unigrams(2, 10)).unwrap();
        let v = content_vector(&m, &task("9", "nothing familiar"));
        assert!(v.entries.is_empty());
        assert_eq!(v.to_dense(), vec![0.0]);
    }

    #[test]
    fn bigrams_stay_within_sentences() {
        let docs = [task("1", "Click banner. Watch video"), task("2", "click banner. watch video")];
        let refs: Vec<&MicroTask> = docs.iter().collect();
        let m = fit_content_model(&refs, &ContentConfig::default()).unwrap();
        assert!(m.column("click banner").is_some());
        assert!(m.column("banner watch").is_none());
    }
}
