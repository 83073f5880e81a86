//! Classifiers: naive Bayes, k-nearest-neighbors, decision tree, random
//! forest and a linear SVM trained with SMO (one-vs-rest).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::features::{FeatureMatrix, FeatureSet};

mod forest;
mod knn;
mod naive_bayes;
mod svm;
mod tree;

pub use forest::RandomForest;
pub use knn::Knn;
pub use naive_bayes::{GaussianNb, MultinomialNb};
pub use svm::{kkt_violations, smo_binary, BinarySmo, LinearSvm};
pub use tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("training data has {0} class(es); at least 2 are required")]
    TooFewClasses(usize),
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in training row {0}")]
    NonFinite(usize),
    #[error("invalid learner config: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    NaiveBayes,
    Knn,
    Tree,
    Forest,
    SvmSmo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::NaiveBayes, Algorithm::Knn, Algorithm::Tree, Algorithm::Forest, Algorithm::SvmSmo];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "naive_bayes",
            Algorithm::Knn => "knn",
            Algorithm::Tree => "tree",
            Algorithm::Forest => "forest",
            Algorithm::SvmSmo => "svm_smo",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        Self::ALL.into_iter().find(|a| a.tag().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How many features a forest split considers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFraction {
    Sqrt,
    Log2,
    All,
    Fraction(f64),
}

impl FeatureFraction {
    pub fn count(self, d: usize) -> usize {
        let n = match self {
            FeatureFraction::Sqrt => crate::math::sqrt(d as f64) as usize,
            FeatureFraction::Log2 => libm::log2(d as f64) as usize + 1,
            FeatureFraction::All => d,
            FeatureFraction::Fraction(f) => (f * d as f64) as usize,
        };
        n.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub knn_k: usize,
    /// Min-max scale features before measuring distances.
    pub knn_normalize: bool,
    pub tree_min_leaf: usize,
    pub forest_trees: usize,
    pub forest_feature_fraction: FeatureFraction,
    pub svm_c: f64,
    pub svm_tol: f64,
    /// Cap on full sweeps over the training set.
    pub svm_max_passes: usize,
    pub nb_variance_floor: f64,
    /// Laplace smoothing for the multinomial event model.
    pub nb_alpha: f64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            knn_k: 1,
            knn_normalize: true,
            tree_min_leaf: 2,
            forest_trees: 100,
            forest_feature_fraction: FeatureFraction::Sqrt,
            svm_c: 1.0,
            svm_tol: 1e-3,
            svm_max_passes: 10,
            nb_variance_floor: 1e-9,
            nb_alpha: 1.0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        let checks = [
            (self.knn_k >= 1, "knn_k must be at least 1"),
            (self.tree_min_leaf >= 1, "tree_min_leaf must be at least 1"),
            (self.forest_trees >= 1, "forest_trees must be at least 1"),
            (self.svm_c > 0.0 && self.svm_c.is_finite(), "svm_c must be positive"),
            (self.svm_tol > 0.0, "svm_tol must be positive"),
            (self.svm_max_passes >= 1, "svm_max_passes must be at least 1"),
            (self.nb_variance_floor > 0.0, "nb_variance_floor must be positive"),
            (self.nb_alpha > 0.0, "nb_alpha must be positive"),
        ];
        if let FeatureFraction::Fraction(f) = self.forest_feature_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(LearnError::InvalidConfig("forest feature fraction must lie in (0, 1]"));
            }
        }
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(LearnError::InvalidConfig(msg)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    GaussianNb(GaussianNb),
    MultinomialNb(MultinomialNb),
    Knn(Knn),
    Tree(DecisionTree),
    Forest(RandomForest),
    Svm(LinearSvm),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub algorithm: Algorithm,
    pub classes: Vec<String>,
    pub n_features: usize,
    pub seed: u64,
    pub params: ModelParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class_index: usize,
    pub label: String,
    pub scores: Vec<f64>,
}

/// Index of the largest score; the earliest class wins ties.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Map labels to indices into their sorted distinct values.
pub fn encode_labels(y: &[String]) -> (Vec<String>, Vec<usize>) {
    let classes: Vec<String> = y.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let idx = y.iter().map(|l| classes.binary_search(l).unwrap_or(0)).collect();
    (classes, idx)
}

pub fn train(
    algorithm: Algorithm,
    x: &FeatureMatrix,
    y: &[String],
    config: &LearnerConfig,
    seed: u64,
) -> Result<TrainedModel, LearnError> {
    config.validate()?;
    if x.n_rows() != y.len() {
        return Err(LearnError::LengthMismatch { rows: x.n_rows(), labels: y.len() });
    }
    if let Some(r) = x.rows().iter().position(|row| row.iter().any(|v| !v.is_finite())) {
        return Err(LearnError::NonFinite(r));
    }
    let (classes, labels) = encode_labels(y);
    if classes.len() < 2 {
        return Err(LearnError::TooFewClasses(classes.len()));
    }
    let rows = x.rows();
    let k = classes.len();
    let params = match algorithm {
        Algorithm::NaiveBayes => {
            let content_only = x.provenance().len() == 1 && x.provenance().contains(&FeatureSet::Content);
            if content_only && rows.iter().flatten().all(|v| *v >= 0.0) {
                ModelParams::MultinomialNb(MultinomialNb::fit(rows, &labels, k, config.nb_alpha))
            } else {
                ModelParams::GaussianNb(GaussianNb::fit(rows, &labels, k, config.nb_variance_floor))
            }
        }
        Algorithm::Knn => ModelParams::Knn(Knn::fit(rows, &labels, k, config.knn_k, config.knn_normalize)),
        Algorithm::Tree => {
            let params = TreeParams { min_leaf: config.tree_min_leaf, max_features: None };
            let all: Vec<usize> = (0..rows.len()).collect();
            ModelParams::Tree(DecisionTree::fit(rows, &labels, &all, k, &params, seed))
        }
        Algorithm::Forest => ModelParams::Forest(RandomForest::fit(rows, &labels, k, config, seed)),
        Algorithm::SvmSmo => ModelParams::Svm(LinearSvm::fit(rows, &labels, k, config, seed)),
    };
    Ok(TrainedModel { algorithm, classes, n_features: x.n_cols(), seed, params })
}

impl TrainedModel {
    /// Raw per-class scores for `x`.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        if x.len() != self.n_features {
            return Err(LearnError::DimensionMismatch { expected: self.n_features, found: x.len() });
        }
        Ok(match &self.params {
            ModelParams::GaussianNb(m) => m.posteriors(x),
            ModelParams::MultinomialNb(m) => m.posteriors(x),
            ModelParams::Knn(m) => m.votes(x),
            ModelParams::Tree(m) => m.distribution(x).to_vec(),
            ModelParams::Forest(m) => m.votes(x),
            ModelParams::Svm(m) => m.decision_values(x),
        })
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction, LearnError> {
        let scores = self.scores(x)?;
        let class_index = argmax(&scores);
        Ok(Prediction { class_index, label: self.classes[class_index].clone(), scores })
    }

    pub fn predict_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<Prediction>, LearnError> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}
