//! Stratified cross-validation, per-class metrics and the feature-set by
//! classifier grid.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, MicroTask};
use crate::features::{combination_label, FeatureConfig, FeatureError, FeaturePipeline, FeatureSet, SentimentLexicon};
use crate::learn::{encode_labels, train, Algorithm, LearnError, LearnerConfig};
use crate::math::ratio;
use crate::par::map_range;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("{folds} folds requested for {instances} instances")]
    TooManyFolds { folds: usize, instances: usize },
    #[error("fold {fold}: {source}")]
    Features { fold: usize, source: FeatureError },
    #[error("fold {fold}: {source}")]
    Learn { fold: usize, source: LearnError },
}

/// Partition `0..y.len()` into `k` folds. Each class is shuffled with the
/// seeded generator and dealt round-robin; the dealing position carries over
/// from one class to the next so fold sizes stay balanced too.
pub fn stratified_folds(y: &[String], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 {
        return Err(EvalError::TooFewFolds(k));
    }
    if k > y.len() {
        return Err(EvalError::TooManyFolds { folds: k, instances: y.len() });
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, label) in y.iter().enumerate() {
        by_class.entry(label).or_default().push(i);
    }
    let mut rng = Rng::new(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for members in by_class.values_mut() {
        rng.shuffle(members);
        for &i in members.iter() {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub per_class: Vec<ClassMetrics>,
    pub weighted_f1: f64,
}

/// Per-class precision, recall and F1 from a confusion matrix with actual
/// classes as rows. Empty denominators give 0.
pub fn compute_metrics(confusion: &[Vec<usize>], classes: &[String]) -> Metrics {
    let k = classes.len();
    let total: usize = confusion.iter().flatten().sum();
    let mut per_class = Vec::with_capacity(k);
    let mut weighted_f1 = 0.0;
    for (c, class) in classes.iter().enumerate() {
        let tp = confusion[c][c] as f64;
        let support: usize = confusion[c].iter().sum();
        let predicted: usize = confusion.iter().map(|row| row[c]).sum();
        let precision = ratio(tp, predicted as f64);
        let recall = ratio(tp, support as f64);
        let f1 = ratio(2.0 * precision * recall, precision + recall);
        weighted_f1 += ratio(support as f64, total as f64) * f1;
        per_class.push(ClassMetrics { class: class.clone(), precision, recall, f1, support });
    }
    Metrics { per_class, weighted_f1 }
}

/// What was evaluated, echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellConfig {
    pub feature_sets: String,
    pub algorithm: Algorithm,
    pub folds: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub classes: Vec<String>,
    pub per_class: Vec<ClassMetrics>,
    pub weighted_f1: f64,
    /// Rows are actual classes, columns predicted.
    pub confusion: Vec<Vec<usize>>,
    pub config_echo: CellConfig,
    pub fold_scores: Vec<f64>,
}

/// Everything besides the corpus that a cross-validation run needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalConfig {
    pub learner: LearnerConfig,
    pub features: FeatureConfig,
    pub lexicon: SentimentLexicon,
}

/// Per-fold confusion matrix; features are fitted on the training split.
#[allow(clippy::too_many_arguments)]
fn run_fold(
    corpus: &Corpus,
    classes: &[String],
    labels: &[usize],
    folds: &[Vec<usize>],
    fold: usize,
    sets: &BTreeSet<FeatureSet>,
    algorithm: Algorithm,
    seed: u64,
    config: &EvalConfig,
) -> Result<Vec<Vec<usize>>, EvalError> {
    let tasks = corpus.tasks();
    let test = &folds[fold];
    let train_idx: Vec<usize> =
        folds.iter().enumerate().filter(|(f, _)| *f != fold).flat_map(|(_, idx)| idx.iter().copied()).collect();
    let train_tasks: Vec<&MicroTask> = train_idx.iter().map(|&i| &tasks[i]).collect();
    let test_tasks: Vec<&MicroTask> = test.iter().map(|&i| &tasks[i]).collect();
    let fe = |source| EvalError::Features { fold, source };
    let pipeline = FeaturePipeline::fit(&train_tasks, sets, &config.features, &config.lexicon).map_err(fe)?;
    let x_train = pipeline.transform(&train_tasks).map_err(fe)?;
    let x_test = pipeline.transform(&test_tasks).map_err(fe)?;
    let y_train: Vec<String> = train_idx.iter().map(|&i| classes[labels[i]].clone()).collect();
    let le = |source| EvalError::Learn { fold, source };
    let model = train(algorithm, &x_train, &y_train, &config.learner, seed.wrapping_add(fold as u64)).map_err(le)?;
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    for (row, &i) in x_test.rows().iter().zip(test) {
        let p = model.predict(row).map_err(le)?;
        // the model only knows classes seen in training; map back by name
        let predicted = classes.binary_search(&p.label).unwrap_or(0);
        confusion[labels[i]][predicted] += 1;
    }
    Ok(confusion)
}

/// k-fold stratified cross-validation with one pooled confusion matrix.
pub fn cross_validate(
    corpus: &Corpus,
    sets: &BTreeSet<FeatureSet>,
    algorithm: Algorithm,
    k: usize,
    seed: u64,
    config: &EvalConfig,
) -> Result<EvaluationReport, EvalError> {
    let y = corpus.labels();
    let folds = stratified_folds(&y, k, seed)?;
    let (classes, labels) = encode_labels(&y);
    let per_fold = map_range(k, |f| run_fold(corpus, &classes, &labels, &folds, f, sets, algorithm, seed, config));
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    let mut fold_scores = Vec::with_capacity(k);
    for result in per_fold {
        let m = result?;
        fold_scores.push(compute_metrics(&m, &classes).weighted_f1);
        for (row, add) in confusion.iter_mut().zip(&m) {
            row.iter_mut().zip(add).for_each(|(a, b)| *a += b);
        }
    }
    let metrics = compute_metrics(&confusion, &classes);
    Ok(EvaluationReport {
        classes,
        per_class: metrics.per_class,
        weighted_f1: metrics.weighted_f1,
        confusion,
        config_echo: CellConfig { feature_sets: combination_label(sets), algorithm, folds: k, seed },
        fold_scores,
    })
}

/// Reports for every (feature-set combination, algorithm) pair, combinations
/// outermost. Every cell uses the same seed, so all cells share folds.
pub fn grid_run(
    corpus: &Corpus,
    combinations: &[BTreeSet<FeatureSet>],
    algorithms: &[Algorithm],
    k: usize,
    seed: u64,
    config: &EvalConfig,
) -> Result<Vec<EvaluationReport>, EvalError> {
    let n_algo = algorithms.len();
    map_range(combinations.len() * n_algo, |cell| {
        cross_validate(corpus, &combinations[cell / n_algo], algorithms[cell % n_algo], k, seed, config)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TaskRecord;
    use alloc::format;
    use alloc::string::ToString;

    fn labels(spec: &[(&str, usize)]) -> Vec<String> {
        spec.iter().flat_map(|(l, n)| core::iter::repeat_n(l.to_string(), *n)).collect()
    }

    #[test]
    fn folds_exactly_proportional() {
        let y = labels(&[("a", 60), ("b", 40)]);
        let folds = stratified_folds(&y, 10, 3).unwrap();
        for f in &folds {
            assert_eq!(f.len(), 10);
            assert_eq!(f.iter().filter(|&&i| y[i] == "a").count(), 6);
        }
        assert_eq!(folds, stratified_folds(&y, 10, 3).unwrap());
    }

    #[test]
    fn small_class_spreads_one_per_fold() {
        let y = labels(&[("a", 3), ("b", 30)]);
        let folds = stratified_folds(&y, 10, 0).unwrap();
        let counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| y[i] == "a").count()).collect();
        assert_eq!(counts.iter().filter(|&&c| c == 1).count(), 3);
        assert_eq!(counts.iter().filter(|&&c| c == 0).count(), 7);
    }

    #[test]
    fn fold_errors() {
        let y = labels(&[("a", 3)]);
        assert_eq!(stratified_folds(&y, 1, 0), Err(EvalError::TooFewFolds(1)));
        assert_eq!(stratified_folds(&y, 4, 0), Err(EvalError::TooManyFolds { folds: 4, instances: 3 }));
    }

    #[test]
    fn metrics_hand_values() {
        let classes = vec!["A".to_string(), "B".to_string()];
        let m = compute_metrics(&[vec![3, 1], vec![2, 4]], &classes);
        let a = &m.per_class[0];
        assert!((a.precision - 0.6).abs() < 1e-12);
        assert!((a.recall - 0.75).abs() < 1e-12);
        assert!((a.f1 - 2.0 / 3.0).abs() < 1e-9);
        // B: P = 4/5, R = 4/6
        let b = &m.per_class[1];
        let fb = 2.0 * 0.8 * (4.0 / 6.0) / (0.8 + 4.0 / 6.0);
        assert!((b.f1 - fb).abs() < 1e-12);
        assert!((m.weighted_f1 - (0.4 * 2.0 / 3.0 + 0.6 * fb)).abs() < 1e-12);

        let perfect = compute_metrics(&[vec![5, 0], vec![0, 5]], &classes);
        assert_eq!(perfect.weighted_f1, 1.0);
    }

    #[test]
    fn metrics_zero_over_zero() {
        let classes: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let m = compute_metrics(&[vec![2, 0, 0], vec![1, 1, 0], vec![0, 0, 0]], &classes);
        let c = &m.per_class[2];
        assert_eq!((c.precision, c.recall, c.f1, c.support), (0.0, 0.0, 0.0, 0));
    }

    #[test]
    fn constant_features_reduce_to_majority_baseline() {
        let records = (0..40).map(|i| {
            let cat = if i < 28 { "big" } else { "small" };
            let mut r = TaskRecord::new(&format!("t{i}"), cat, "Same words every time.");
            r.employer = Some("e".into());
            r.payment = Some(0.1);
            r.time_to_finish = Some(5.0);
            r
        });
        let corpus = Corpus::from_records(records).unwrap();
        let sets: BTreeSet<FeatureSet> = [FeatureSet::Factual, FeatureSet::Structural].into_iter().collect();
        let report = cross_validate(&corpus, &sets, Algorithm::NaiveBayes, 5, 1, &EvalConfig::default()).unwrap();
        // predicting "big" everywhere: P = 0.7, R = 1
        let p = 0.7;
        let baseline = p * (2.0 * p / (1.0 + p));
        assert!((report.weighted_f1 - baseline).abs() < 1e-12, "{}", report.weighted_f1);
        assert_eq!(report.confusion.iter().flatten().sum::<usize>(), 40);
    }
}
