use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, TreeParams};
use super::{argmax, LearnerConfig};
use crate::par::map_range;
use crate::rng::Rng;

/// Bagged trees with random feature subsets; tree `t` is seeded with
/// `seed + t`, so results do not depend on how trees are scheduled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub n_classes: usize,
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, config: &LearnerConfig, seed: u64) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let params = TreeParams {
            min_leaf: config.tree_min_leaf,
            max_features: Some(config.forest_feature_fraction.count(d)),
        };
        let n = rows.len();
        let trees = map_range(config.forest_trees, |t| {
            let tree_seed = seed.wrapping_add(t as u64);
            let mut rng = Rng::new(tree_seed);
            let sample: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
            // the split generator gets its own stream, offset from the bootstrap one
            DecisionTree::fit(rows, labels, &sample, n_classes, &params, tree_seed ^ 0x9e37_79b9_7f4a_7c15)
        });
        Self { n_classes, trees }
    }

    pub fn votes(&self, x: &[f64]) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for t in &self.trees {
            votes[argmax(t.distribution(x))] += 1.0;
        }
        let n = self.trees.len() as f64;
        votes.iter_mut().for_each(|v| *v /= n);
        votes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                rows.push(vec![i as f64, j as f64, ((i * 7 + j * 3) % 5) as f64]);
                labels.push((i + j) % 3);
            }
        }
        (rows, labels)
    }

    #[test]
    fn deterministic_for_a_seed() {
        let (rows, labels) = grid();
        let cfg = LearnerConfig { forest_trees: 10, ..LearnerConfig::default() };
        let a = RandomForest::fit(&rows, &labels, 3, &cfg, 5);
        let b = RandomForest::fit(&rows, &labels, 3, &cfg, 5);
        assert_eq!(a, b);
        let c = RandomForest::fit(&rows, &labels, 3, &cfg, 6);
        assert_ne!(a, c);
    }

    #[test]
    fn tree_order_does_not_change_votes() {
        let (rows, labels) = grid();
        let cfg = LearnerConfig { forest_trees: 15, ..LearnerConfig::default() };
        let f = RandomForest::fit(&rows, &labels, 3, &cfg, 1);
        let mut rev = f.clone();
        rev.trees.reverse();
        for r in &rows {
            assert_eq!(f.votes(r), rev.votes(r));
        }
    }

    #[test]
    fn unanimous_vote_scores_one() {
        let rows = vec![vec![0.0], vec![0.1], vec![10.0], vec![10.1]];
        let labels = vec![0, 0, 1, 1];
        let cfg = LearnerConfig { forest_trees: 100, tree_min_leaf: 1, ..LearnerConfig::default() };
        let f = RandomForest::fit(&rows, &labels, 2, &cfg, 0);
        // every bootstrap with both classes splits between 0.1 and 10; a
        // one-class bootstrap still votes for the class it saw
        let v = f.votes(&[-5.0]);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let single = RandomForest { n_classes: 2, trees: vec![f.trees[0].clone(); 100] };
        let s = single.votes(&[-5.0]);
        assert!(s.contains(&1.0));
    }
}
