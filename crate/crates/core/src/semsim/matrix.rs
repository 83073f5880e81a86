//! Pairwise task similarity under either measure.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::comprehensibility::{comprehensibility_similarity, document_frequencies, ComprehensibilityVector, FeatureStats, Wordlist};
use super::phrases::{extract_verb_phrases, required_action_similarity_with, RequiredActionConfig, VerbPhrase};
use super::wordnet::{Pos, WordNetGraph};
use crate::corpus::Corpus;
use crate::par::map_range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    RequiredAction,
    Comprehensibility,
}

impl Measure {
    pub fn tag(self) -> &'static str {
        match self {
            Measure::RequiredAction => "required_action",
            Measure::Comprehensibility => "comprehensibility",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Measure::RequiredAction, Measure::Comprehensibility].into_iter().find(|m| m.tag() == s.trim())
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("{ids} ids but {values} values")]
    Shape { ids: usize, values: usize },
    #[error("value at ({row}, {col}) is {value}, outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("diagonal entry {0} is not 1")]
    Diagonal(usize),
    #[error("asymmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
}

/// Symmetric similarity matrix with unit diagonal, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    task_ids: Vec<String>,
    values: Vec<f64>,
    measure: Measure,
}

impl SimilarityMatrix {
    /// Build from explicit values, checking the matrix invariants.
    pub fn from_values(task_ids: Vec<String>, values: Vec<f64>, measure: Measure) -> Result<Self, MatrixError> {
        let n = task_ids.len();
        if values.len() != n * n {
            return Err(MatrixError::Shape { ids: n, values: values.len() });
        }
        for i in 0..n {
            if values[i * n + i] != 1.0 {
                return Err(MatrixError::Diagonal(i));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(MatrixError::OutOfRange { row: i, col: j, value: v });
                }
                if (v - values[j * n + i]).abs() > 1e-9 {
                    return Err(MatrixError::Asymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { task_ids, values, measure })
    }

    /// Fill the upper triangle with `f(i, j)` for `i < j` and mirror it.
    pub fn from_fn<F>(task_ids: Vec<String>, measure: Measure, f: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        let n = task_ids.len();
        let upper = map_range(n, |i| ((i + 1)..n).map(|j| f(i, j).clamp(0.0, 1.0)).collect::<Vec<f64>>());
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            values[i * n + i] = 1.0;
            for (off, v) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self { task_ids, values, measure }
    }

    pub fn len(&self) -> usize {
        self.task_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.task_ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn task_ids(&self) -> &[String] {
        &self.task_ids
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }
}

/// What each measure needs beyond the corpus.
#[derive(Debug, Clone, Copy)]
pub enum MeasureResources<'a> {
    RequiredAction { wordnet: &'a WordNetGraph, config: RequiredActionConfig },
    Comprehensibility { wordlist: &'a Wordlist },
}

impl MeasureResources<'_> {
    pub fn measure(&self) -> Measure {
        match self {
            MeasureResources::RequiredAction { .. } => Measure::RequiredAction,
            MeasureResources::Comprehensibility { .. } => Measure::Comprehensibility,
        }
    }
}

/// Word similarities between every pair of distinct lemmas, computed once.
struct LemmaTable {
    index: BTreeMap<(Pos, String), usize>,
    sizes: [usize; 2],
    tables: [Vec<f64>; 2],
}

impl LemmaTable {
    fn build(phrases: &[Vec<VerbPhrase>], wn: &WordNetGraph, config: &RequiredActionConfig) -> Self {
        let mut lemmas: [Vec<String>; 2] = [Vec::new(), Vec::new()];
        let mut index = BTreeMap::new();
        let mut add = |pos: Pos, slot: usize, l: &String, lemmas: &mut [Vec<String>; 2]| {
            index.entry((pos, l.clone())).or_insert_with(|| {
                lemmas[slot].push(l.clone());
                lemmas[slot].len() - 1
            });
        };
        for p in phrases.iter().flatten() {
            add(Pos::Verb, 0, &p.verb_lemma, &mut lemmas);
            for a in &p.argument_lemmas {
                add(Pos::Noun, 1, a, &mut lemmas);
            }
        }
        let table = |words: &[String], pos: Pos| -> Vec<f64> {
            let n = words.len();
            map_range(n * n, |k| wn.similarity(&words[k / n], &words[k % n], pos, config.measure))
        };
        let tables = [table(&lemmas[0], Pos::Verb), table(&lemmas[1], Pos::Noun)];
        Self { index, sizes: [lemmas[0].len(), lemmas[1].len()], tables }
    }

    fn get(&self, a: &str, b: &str, pos: Pos) -> f64 {
        let slot = usize::from(pos != Pos::Verb);
        let i = self.index.get(&(pos, a.into()));
        let j = self.index.get(&(pos, b.into()));
        match (i, j) {
            (Some(&i), Some(&j)) => self.tables[slot][i * self.sizes[slot] + j],
            _ => 0.0,
        }
    }
}

/// Verb phrases of every task in corpus order.
pub fn corpus_phrases(corpus: &Corpus, wn: &WordNetGraph) -> Vec<Vec<VerbPhrase>> {
    let tasks = corpus.tasks();
    map_range(tasks.len(), |i| extract_verb_phrases(&tasks[i], wn))
}

/// Comprehensibility vectors of every task with corpus-wide statistics.
pub fn corpus_comprehensibility(corpus: &Corpus, wordlist: &Wordlist) -> (Vec<ComprehensibilityVector>, FeatureStats) {
    let df = document_frequencies(corpus.tasks());
    let vectors: Vec<ComprehensibilityVector> =
        corpus.tasks().iter().map(|t| ComprehensibilityVector::of(t, &df, wordlist)).collect();
    let stats = FeatureStats::fit(&vectors);
    (vectors, stats)
}

pub fn similarity_matrix(corpus: &Corpus, resources: MeasureResources<'_>) -> SimilarityMatrix {
    let ids: Vec<String> = corpus.tasks().iter().map(|t| t.id.clone()).collect();
    match resources {
        MeasureResources::RequiredAction { wordnet, config } => {
            let phrases = corpus_phrases(corpus, wordnet);
            let table = LemmaTable::build(&phrases, wordnet, &config);
            let sim = |a: &str, b: &str, pos: Pos| table.get(a, b, pos);
            SimilarityMatrix::from_fn(ids, Measure::RequiredAction, |i, j| {
                required_action_similarity_with(&phrases[i], &phrases[j], config.verb_weight, &sim)
            })
        }
        MeasureResources::Comprehensibility { wordlist } => {
            let (vectors, stats) = corpus_comprehensibility(corpus, wordlist);
            SimilarityMatrix::from_fn(ids, Measure::Comprehensibility, |i, j| {
                comprehensibility_similarity(&vectors[i], &vectors[j], &stats)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaskRecord;
    use crate::semsim::{required_action_similarity, WordMeasure};

    fn graph() -> WordNetGraph {
        let mut g = WordNetGraph::new();
        let act = g.add_synset(Pos::Verb, &["act"], "");
        for v in ["sign", "watch", "download"] {
            let id = g.add_synset(Pos::Verb, &[v], "");
            g.add_hypernym(id, act);
        }
        let thing = g.add_synset(Pos::Noun, &["thing"], "");
        for n in ["email", "video", "app"] {
            let id = g.add_synset(Pos::Noun, &[n], "");
            g.add_hypernym(id, thing);
        }
        g
    }

    fn corpus() -> Corpus {
        Corpus::from_records([
            TaskRecord::new("a", "x", "Sign your email. Watch the video."),
            TaskRecord::new("b", "x", "Download the app, then watch a video."),
            TaskRecord::new("c", "y", "Sign your email. Watch the video."),
            TaskRecord::new("d", "y", "Nothing to do here"),
        ])
        .unwrap()
    }

    #[test]
    fn required_action_matches_pairwise_calls() {
        let g = graph();
        let c = corpus();
        for measure in [WordMeasure::Path, WordMeasure::WuPalmer] {
            let config = RequiredActionConfig { measure, ..RequiredActionConfig::default() };
            let m = similarity_matrix(&c, MeasureResources::RequiredAction { wordnet: &g, config });
            let phrases = corpus_phrases(&c, &g);
            for i in 0..4 {
                assert_eq!(m.get(i, i), 1.0);
                for j in 0..4 {
                    if i != j {
                        let direct = required_action_similarity(&phrases[i], &phrases[j], &g, &config);
                        assert!((m.get(i, j) - direct).abs() < 1e-15);
                    }
                }
            }
            assert_eq!(m.get(0, 2), 1.0);
            assert_eq!(m.get(0, 3), 0.0);
        }
    }

    #[test]
    fn comprehensibility_identical_texts() {
        let c = corpus();
        let words = Wordlist::default();
        let m = similarity_matrix(&c, MeasureResources::Comprehensibility { wordlist: &words });
        assert_eq!(m.get(0, 2), 1.0);
        assert!(m.get(0, 1) < 1.0);
        let again = SimilarityMatrix::from_values(m.task_ids().to_vec(), m.values.clone(), m.measure()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn from_values_checks_invariants() {
        let ids = vec!["a".into(), "b".into()];
        assert!(matches!(
            SimilarityMatrix::from_values(ids.clone(), vec![1.0, 0.5, 0.4, 1.0], Measure::Comprehensibility),
            Err(MatrixError::Asymmetric { .. })
        ));
        assert!(matches!(
            SimilarityMatrix::from_values(ids.clone(), vec![0.9, 0.5, 0.5, 1.0], Measure::Comprehensibility),
            Err(MatrixError::Diagonal(0))
        ));
        assert!(matches!(
            SimilarityMatrix::from_values(ids, vec![1.0, 1.5, 1.5, 1.0], Measure::Comprehensibility),
            Err(MatrixError::OutOfRange { .. })
        ));
    }
}
