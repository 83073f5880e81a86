//! The four feature sets (factual, content, structural, semantic) and the
//! per-fold pipeline that fits and applies them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::MicroTask;

mod content;
mod factual;
mod semantic;
mod structural;

pub use content::{content_vector, fit_content_model, ContentConfig, ContentModel, SparseVector};
pub use factual::{factual_columns, factual_features, FactualVector};
pub use semantic::{named_entity_count, semantic_columns, semantic_features, sentiment, SentimentLexicon};
pub use structural::{gunning_fog, lexical_diversity, structural_features, StructuralFeatures, LEXICAL_WINDOW};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("feature parts disagree on row count: {expected} vs {found}")]
    RowMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error("non-finite value in row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("cannot fit on an empty training set")]
    EmptyTrainingSet,
    #[error("no feature sets selected")]
    NoFeatureSets,
    #[error("sentiment lexicon line {line}: {reason}")]
    Lexicon { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    Factual,
    Content,
    Structural,
    Semantic,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 4] = [FeatureSet::Factual, FeatureSet::Content, FeatureSet::Structural, FeatureSet::Semantic];

    pub fn tag(self) -> &'static str {
        match self {
            FeatureSet::Factual => "factual",
            FeatureSet::Content => "content",
            FeatureSet::Structural => "structural",
            FeatureSet::Semantic => "semantic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Display form of a set combination: tags joined with `+`.
pub fn combination_label(sets: &BTreeSet<FeatureSet>) -> String {
    sets.iter().map(|s| s.tag()).collect::<Vec<_>>().join("+")
}

/// All 15 non-empty combinations: singletons first, then pairs, and so on,
/// each size in set order.
pub fn all_combinations() -> Vec<BTreeSet<FeatureSet>> {
    let mut out: Vec<BTreeSet<FeatureSet>> = (1u8..16)
        .map(|mask| FeatureSet::ALL.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| *s).collect())
        .collect();
    out.sort_by(|a: &BTreeSet<FeatureSet>, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

/// Dense numeric matrix with named columns, one row per task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    column_names: Vec<String>,
    rows: Vec<Vec<f64>>,
    provenance: BTreeSet<FeatureSet>,
}

impl FeatureMatrix {
    pub fn new(
        column_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        provenance: BTreeSet<FeatureSet>,
    ) -> Result<Self, FeatureError> {
        let mut seen = BTreeSet::new();
        for name in &column_names {
            if !seen.insert(name.as_str()) {
                return Err(FeatureError::DuplicateColumn(name.clone()));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != column_names.len() {
                return Err(FeatureError::RaggedRow { row: r, expected: column_names.len(), found: row.len() });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(FeatureError::NonFinite { row: r, column: column_names[c].clone() });
            }
        }
        Ok(Self { column_names, rows, provenance })
    }

    /// Unlabeled matrix for callers that only need numbers, e.g. tests.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, FeatureError> {
        let width = rows.first().map_or(0, Vec::len);
        Self::new((0..width).map(|i| format!("x{i}")).collect(), rows, BTreeSet::new())
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn provenance(&self) -> &BTreeSet<FeatureSet> {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: BTreeSet<FeatureSet>) -> Self {
        self.provenance = provenance;
        self
    }

    /// Matrix restricted to the given rows, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            column_names: self.column_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Concatenate matrices column-wise. Column names get their part's set tag
/// as a prefix (`content:click`); provenance is the union.
pub fn combine_features(parts: Vec<FeatureMatrix>) -> Result<FeatureMatrix, FeatureError> {
    let n_rows = parts.first().map_or(0, FeatureMatrix::n_rows);
    if let Some(bad) = parts.iter().find(|p| p.n_rows() != n_rows) {
        return Err(FeatureError::RowMismatch { expected: n_rows, found: bad.n_rows() });
    }
    let mut names = Vec::new();
    let mut provenance = BTreeSet::new();
    let mut rows = alloc::vec![Vec::new(); n_rows];
    for part in parts {
        let prefix = combination_label(&part.provenance);
        for name in part.column_names {
            names.push(if prefix.is_empty() { name } else { format!("{prefix}:{name}") });
        }
        for (dst, src) in rows.iter_mut().zip(part.rows) {
            dst.extend(src);
        }
        provenance.extend(part.provenance);
    }
    FeatureMatrix::new(names, rows, provenance)
}

/// Sorted string vocabulary fitted on training data; lookups outside it
/// fall into an "other" bucket held by the caller.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl From<Vec<String>> for Vocabulary {
    fn from(terms: Vec<String>) -> Self {
        Self::from_terms(terms)
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.terms
    }
}

impl Vocabulary {
    pub fn fit<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = items.into_iter().map(|s| s.as_ref().to_string()).filter(|s| !s.is_empty()).collect();
        Self::from_terms(set.into_iter().collect())
    }

    fn from_terms(terms: Vec<String>) -> Self {
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms, index }
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub content: ContentConfig,
}

/// Everything fitted on a training split: content model and the one-hot
/// vocabularies. Applying it never looks at other data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturePipeline {
    sets: BTreeSet<FeatureSet>,
    employers: Vocabulary,
    countries: Vocabulary,
    hosts: Vocabulary,
    content: Option<ContentModel>,
    lexicon: SentimentLexicon,
}

impl FeaturePipeline {
    pub fn fit(
        train: &[&MicroTask],
        sets: &BTreeSet<FeatureSet>,
        config: &FeatureConfig,
        lexicon: &SentimentLexicon,
    ) -> Result<Self, FeatureError> {
        if sets.is_empty() {
            return Err(FeatureError::NoFeatureSets);
        }
        if train.is_empty() {
            return Err(FeatureError::EmptyTrainingSet);
        }
        let wants = |s| sets.contains(&s);
        let employers =
            if wants(FeatureSet::Factual) { Vocabulary::fit(train.iter().map(|t| t.employer.as_str())) } else { Vocabulary::default() };
        let countries = if wants(FeatureSet::Factual) {
            Vocabulary::fit(train.iter().flat_map(|t| t.countries.iter()))
        } else {
            Vocabulary::default()
        };
        let hosts = if wants(FeatureSet::Semantic) {
            Vocabulary::fit(train.iter().flat_map(|t| t.structure.url_hosts.iter()))
        } else {
            Vocabulary::default()
        };
        let content = if wants(FeatureSet::Content) { Some(fit_content_model(train, &config.content)?) } else { None };
        Ok(Self { sets: sets.clone(), employers, countries, hosts, content, lexicon: lexicon.clone() })
    }

    pub fn sets(&self) -> &BTreeSet<FeatureSet> {
        &self.sets
    }

    pub fn content_model(&self) -> Option<&ContentModel> {
        self.content.as_ref()
    }

    /// Feature matrix for `tasks`, sets concatenated in set order.
    pub fn transform(&self, tasks: &[&MicroTask]) -> Result<FeatureMatrix, FeatureError> {
        let mut parts = Vec::new();
        for &set in &self.sets {
            let (names, rows) = match set {
                FeatureSet::Factual => (
                    factual_columns(&self.employers, &self.countries),
                    tasks.iter().map(|t| factual_features(t, &self.employers, &self.countries).values).collect(),
                ),
                FeatureSet::Structural => (
                    StructuralFeatures::NAMES.iter().map(|s| s.to_string()).collect(),
                    tasks.iter().map(|t| structural_features(t).to_vec()).collect(),
                ),
                FeatureSet::Semantic => (
                    semantic_columns(&self.hosts),
                    tasks.iter().map(|t| semantic_features(t, &self.lexicon, &self.hosts)).collect(),
                ),
                FeatureSet::Content => {
                    let model = self.content.as_ref().ok_or(FeatureError::EmptyTrainingSet)?;
                    (model.terms().to_vec(), tasks.iter().map(|t| content_vector(model, t).to_dense()).collect())
                }
            };
            let mut one = BTreeSet::new();
            one.insert(set);
            parts.push(FeatureMatrix::new(names, rows, one)?);
        }
        combine_features(parts)
    }
}
