use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::ln;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub min_leaf: usize,
    /// Features tried per split; `None` tries all of them.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf { distribution: Vec<f64> },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Binary-split tree grown by gain ratio. Leaves hold class proportions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
    split_info: f64,
}

fn entropy(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts.iter().filter(|&&c| c > 0).map(|&c| {
        let p = c as f64 / n;
        -p * ln(p)
    }).sum()
}

struct Builder<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [usize],
    n_classes: usize,
    params: &'a TreeParams,
    rng: Rng,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0usize; self.n_classes];
        for &i in idx {
            c[self.labels[i]] += 1;
        }
        c
    }

    /// Best threshold on one feature by information gain, if any split
    /// leaves `min_leaf` rows on both sides.
    fn best_on_feature(&self, idx: &[usize], feature: usize, parent: &[usize], h_parent: f64) -> Option<Candidate> {
        let first = self.rows[idx[0]][feature];
        if idx.iter().all(|&i| self.rows[i][feature] == first) {
            return None;
        }
        let mut sorted: Vec<(f64, usize)> = idx.iter().map(|&i| (self.rows[i][feature], self.labels[i])).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = sorted.len();
        let min_leaf = self.params.min_leaf;
        let mut left = vec![0usize; self.n_classes];
        let mut best: Option<(f64, usize)> = None;
        for i in 0..n - 1 {
            left[sorted[i].1] += 1;
            let nl = i + 1;
            if sorted[i].0 == sorted[i + 1].0 || nl < min_leaf || n - nl < min_leaf {
                continue;
            }
            let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
            let gain = h_parent
                - (nl as f64 / n as f64) * entropy(&left, nl)
                - ((n - nl) as f64 / n as f64) * entropy(&right, n - nl);
            if best.is_none_or(|(g, _)| gain > g + 1e-12) {
                best = Some((gain, nl));
            }
        }
        let (gain, nl) = best?;
        let (lo, hi) = (sorted[nl - 1].0, sorted[nl].0);
        let mid = lo + (hi - lo) / 2.0;
        let threshold = if mid < hi { mid } else { lo };
        let split_info = entropy(&[nl, n - nl], n);
        Some(Candidate { feature, threshold, gain: gain.max(0.0), split_info })
    }

    /// Among candidates with at least average gain, the highest gain ratio.
    fn choose(cands: Vec<Candidate>) -> Option<Candidate> {
        if cands.is_empty() {
            return None;
        }
        let avg = cands.iter().map(|c| c.gain).sum::<f64>() / cands.len() as f64;
        let mut best: Option<(f64, Candidate)> = None;
        for c in cands {
            if c.gain + 1e-12 < avg {
                continue;
            }
            let ratio = if c.split_info > 0.0 { c.gain / c.split_info } else { 0.0 };
            if best.as_ref().is_none_or(|(r, _)| ratio > *r + 1e-12) {
                best = Some((ratio, c));
            }
        }
        best.map(|(_, c)| c)
    }

    fn find_split(&mut self, idx: &[usize], parent: &[usize]) -> Option<Candidate> {
        let d = self.rows[idx[0]].len();
        let h = entropy(parent, idx.len());
        match self.params.max_features {
            None => Self::choose((0..d).filter_map(|f| self.best_on_feature(idx, f, parent, h)).collect()),
            Some(m) => {
                // random subset first; if it has no usable split keep drawing
                let mut order: Vec<usize> = (0..d).collect();
                self.rng.shuffle(&mut order);
                let mut cands = Vec::new();
                for (tried, &f) in order.iter().enumerate() {
                    if tried >= m && !cands.is_empty() {
                        break;
                    }
                    if let Some(c) = self.best_on_feature(idx, f, parent, h) {
                        cands.push(c);
                    }
                }
                Self::choose(cands)
            }
        }
    }

    fn grow(&mut self, idx: Vec<usize>) -> usize {
        let counts = self.counts(&idx);
        let n = idx.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let split = if pure || n < 2 * self.params.min_leaf { None } else { self.find_split(&idx, &counts) };
        let at = self.nodes.len();
        let Some(split) = split else {
            let distribution = counts.iter().map(|&c| c as f64 / n as f64).collect();
            self.nodes.push(Node::Leaf { distribution });
            return at;
        };
        self.nodes.push(Node::Leaf { distribution: Vec::new() });
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.rows[i][split.feature] <= split.threshold);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[at] = Node::Split { feature: split.feature, threshold: split.threshold, left, right };
        at
    }
}

impl DecisionTree {
    /// Grow a tree on the rows listed in `sample` (repeats allowed).
    pub fn fit(
        rows: &[Vec<f64>],
        labels: &[usize],
        sample: &[usize],
        n_classes: usize,
        params: &TreeParams,
        seed: u64,
    ) -> Self {
        let mut b = Builder { rows, labels, n_classes, params, rng: Rng::new(seed), nodes: Vec::new() };
        if sample.is_empty() {
            b.nodes.push(Node::Leaf { distribution: vec![1.0 / n_classes as f64; n_classes] });
        } else {
            b.grow(sample.to_vec());
        }
        Self { nodes: b.nodes }
    }

    pub fn distribution(&self, x: &[f64]) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { distribution } => return distribution,
                Node::Split { feature, threshold, left, right } => {
                    at = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }
}
