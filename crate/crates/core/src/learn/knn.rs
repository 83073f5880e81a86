use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// k-nearest-neighbors over Euclidean distance, optionally on min-max scaled
/// features. Distance ties go to the earlier training row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    pub k: usize,
    pub n_classes: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    /// Per-feature (min, range); range 0 maps the feature to 0.
    pub scaling: Option<Vec<(f64, f64)>>,
}

impl Knn {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, k: usize, normalize: bool) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let scaling = normalize.then(|| {
            (0..d)
                .map(|j| {
                    let lo = rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
                    let hi = rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
                    (lo, hi - lo)
                })
                .collect::<Vec<_>>()
        });
        let mut model = Self { k, n_classes, rows: Vec::new(), labels: labels.to_vec(), scaling };
        model.rows = rows.iter().map(|r| model.scale(r)).collect();
        model
    }

    fn scale(&self, x: &[f64]) -> Vec<f64> {
        match &self.scaling {
            None => x.to_vec(),
            Some(s) => x.iter().zip(s).map(|(v, (lo, range))| if *range > 0.0 { (v - lo) / range } else { 0.0 }).collect(),
        }
    }

    /// Indices of the k nearest training rows, nearest first.
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let q = self.scale(x);
        let mut dist: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        let k = self.k.min(dist.len());
        let by = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < dist.len() {
            dist.select_nth_unstable_by(k, by);
            dist.truncate(k);
        }
        dist.sort_by(by);
        dist.into_iter().map(|(_, i)| i).collect()
    }

    pub fn votes(&self, x: &[f64]) -> Vec<f64> {
        let nn = self.neighbors(x);
        let mut votes = vec![0.0; self.n_classes];
        for &i in &nn {
            votes[self.labels[i]] += 1.0;
        }
        let n = nn.len().max(1) as f64;
        votes.iter_mut().for_each(|v| *v /= n);
        votes
    }
}
