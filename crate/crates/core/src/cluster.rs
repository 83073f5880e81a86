//! k-medoids (PAM) and average-linkage clustering over a similarity matrix,
//! with per-cluster category breakdowns.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::par::map_range;
use crate::rng::Rng;
use crate::semsim::SimilarityMatrix;

pub const DEFAULT_K: usize = 15;
pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("k = {k} is outside 2..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("task `{0}` is missing on one side")]
    IdMismatch(String),
    #[error("invalid clustering: {0}")]
    Invalid(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub task_ids: Vec<String>,
    /// Cluster id per task, in task order.
    pub assignments: Vec<usize>,
    /// Task index of each cluster's medoid; ids are ordered by medoid index.
    pub medoids: Vec<usize>,
    pub k: usize,
    pub total_dissimilarity: f64,
    pub seed: u64,
    /// Objective after initialization and after every accepted swap.
    pub trace: Vec<f64>,
}

impl Clustering {
    /// Assemble a clustering from parts, checking its invariants.
    pub fn from_parts(
        task_ids: Vec<String>,
        assignments: Vec<usize>,
        medoids: Vec<usize>,
        total_dissimilarity: f64,
        seed: u64,
    ) -> Result<Self, ClusterError> {
        let k = medoids.len();
        if assignments.len() != task_ids.len() {
            return Err(ClusterError::Invalid("one assignment per task required"));
        }
        if assignments.iter().any(|&c| c >= k) {
            return Err(ClusterError::Invalid("cluster ids must be below k"));
        }
        if (0..k).any(|c| !assignments.contains(&c)) {
            return Err(ClusterError::Invalid("cluster ids must be dense"));
        }
        if medoids.iter().enumerate().any(|(c, &m)| m >= task_ids.len() || assignments[m] != c) {
            return Err(ClusterError::Invalid("each medoid must belong to its own cluster"));
        }
        Ok(Self { task_ids, assignments, medoids, k, total_dissimilarity, seed, trace: Vec::new() })
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignments.iter().enumerate().filter(move |(_, &c)| c == cluster).map(|(i, _)| i)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        self.assignments.iter().for_each(|&c| s[c] += 1);
        s
    }
}

fn dissimilarity(sim: &SimilarityMatrix, i: usize, j: usize) -> f64 {
    1.0 - sim.get(i, j)
}

/// Objective of a medoid set: summed distance to the nearest medoid.
pub fn medoid_cost(sim: &SimilarityMatrix, medoids: &[usize]) -> f64 {
    (0..sim.len()).map(|j| medoids.iter().map(|&m| dissimilarity(sim, m, j)).fold(f64::INFINITY, f64::min)).sum()
}

/// Assign points to the nearest medoid (lowest cluster id on ties), medoids
/// to themselves, and relabel so ids follow medoid task order.
fn finish(sim: &SimilarityMatrix, mut medoids: Vec<usize>, seed: u64, trace: Vec<f64>) -> Clustering {
    medoids.sort_unstable();
    let n = sim.len();
    let mut assignments = vec![0; n];
    let mut total = 0.0;
    for (j, slot) in assignments.iter_mut().enumerate() {
        let mut best = (f64::INFINITY, 0);
        for (c, &m) in medoids.iter().enumerate() {
            let d = if m == j { -1.0 } else { dissimilarity(sim, m, j) };
            if d < best.0 {
                best = (d, c);
            }
        }
        *slot = best.1;
        total += best.0.max(0.0);
    }
    let k = medoids.len();
    Clustering { task_ids: sim.task_ids().to_vec(), assignments, medoids, k, total_dissimilarity: total, seed, trace }
}

/// Nearest and second-nearest medoid distance per point, plus the nearest medoid.
fn nearest_two(sim: &SimilarityMatrix, medoids: &[usize]) -> Vec<(f64, f64, usize)> {
    (0..sim.len())
        .map(|j| {
            let (mut d1, mut d2, mut m1) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for &m in medoids {
                let d = dissimilarity(sim, m, j);
                if d < d1 {
                    d2 = d1;
                    d1 = d;
                    m1 = m;
                } else if d < d2 {
                    d2 = d;
                }
            }
            (d1, d2, m1)
        })
        .collect()
}

/// PAM on `d = 1 - sim`. BUILD adds medoids greedily, breaking ties by a
/// seeded order of the points; SWAP then applies the best improving
/// (medoid, candidate) exchange until none is left or `max_iter` swaps ran.
pub fn k_medoids(sim: &SimilarityMatrix, k: usize, seed: u64, max_iter: usize) -> Result<Clustering, ClusterError> {
    let n = sim.len();
    if k < 2 || k > n {
        return Err(ClusterError::KOutOfRange { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    Rng::new(seed).shuffle(&mut order);

    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut nearest = vec![f64::INFINITY; n];
    let mut is_medoid = vec![false; n];
    for _ in 0..k {
        let gains = map_range(n, |i| {
            if is_medoid[i] {
                return f64::NEG_INFINITY;
            }
            (0..n)
                .map(|j| {
                    let d = dissimilarity(sim, i, j);
                    // first medoid: minimize total distance
                    if nearest[j].is_infinite() { -d } else { (nearest[j] - d).max(0.0) }
                })
                .sum()
        });
        let mut pick = None;
        for &i in &order {
            if !is_medoid[i] && pick.is_none_or(|p: usize| gains[i] > gains[p]) {
                pick = Some(i);
            }
        }
        let m = pick.ok_or(ClusterError::Invalid("no candidate medoid left"))?;
        medoids.push(m);
        is_medoid[m] = true;
        for (j, d) in nearest.iter_mut().enumerate() {
            *d = d.min(dissimilarity(sim, m, j));
        }
    }

    let mut cost = medoid_cost(sim, &medoids);
    let mut trace = vec![cost];
    for _ in 0..max_iter {
        let near = nearest_two(sim, &medoids);
        let candidates: Vec<usize> = (0..n).filter(|&h| !is_medoid[h]).collect();
        // best swap per candidate, then the overall best by (cost, medoid, candidate)
        let per_candidate = map_range(candidates.len(), |ci| {
            let h = candidates[ci];
            let mut best: Option<(f64, usize)> = None;
            for &m in &medoids {
                let c: f64 = near
                    .iter()
                    .enumerate()
                    .map(|(j, &(d1, d2, m1))| {
                        let dh = dissimilarity(sim, h, j);
                        if m1 == m { d2.min(dh) } else { d1.min(dh) }
                    })
                    .sum();
                let better = match best {
                    None => true,
                    Some((bc, bm)) => c < bc || (c == bc && m < bm),
                };
                if better {
                    best = Some((c, m));
                }
            }
            best.map(|(c, m)| (c, m, h))
        });
        let best = per_candidate.into_iter().flatten().min_by(|a, b| {
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
        });
        match best {
            Some((c, m, h)) if c < cost - 1e-12 => {
                let slot = medoids.iter().position(|&x| x == m).unwrap_or(0);
                medoids[slot] = h;
                is_medoid[m] = false;
                is_medoid[h] = true;
                // recompute rather than trust the incremental sum
                cost = medoid_cost(sim, &medoids);
                trace.push(cost);
            }
            _ => break,
        }
    }
    Ok(finish(sim, medoids, seed, trace))
}

/// Average-linkage agglomerative clustering cut at `k` clusters; each
/// cluster's medoid minimizes the summed distance to its members.
pub fn agglomerative(sim: &SimilarityMatrix, k: usize, seed: u64) -> Result<Clustering, ClusterError> {
    let n = sim.len();
    if k < 2 || k > n {
        return Err(ClusterError::KOutOfRange { k, n });
    }
    let mut clusters: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    // summed similarity between live clusters
    let mut link: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| sim.get(i, j)).collect()).collect();
    let mut live = n;
    while live > k {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..n {
            let Some(ca) = &clusters[a] else { continue };
            for b in (a + 1)..n {
                let Some(cb) = &clusters[b] else { continue };
                let avg = link[a][b] / (ca.len() * cb.len()) as f64;
                if best.is_none_or(|(s, _, _)| avg > s) {
                    best = Some((avg, a, b));
                }
            }
        }
        let Some((_, a, b)) = best else { break };
        let merged = clusters[b].take().unwrap_or_default();
        if let Some(ca) = clusters[a].as_mut() {
            ca.extend(merged);
        }
        #[allow(clippy::needless_range_loop)] // rows a and b and column a all change
        for c in 0..n {
            let v = link[b][c];
            link[a][c] += v;
            link[c][a] = link[a][c];
        }
        live -= 1;
    }
    let medoids: Vec<usize> = clusters
        .iter()
        .flatten()
        .map(|members| {
            let cost = |m: usize| members.iter().map(|&j| dissimilarity(sim, m, j)).sum::<f64>();
            let mut best = members[0];
            for &m in members {
                if cost(m) < cost(best) || (cost(m) == cost(best) && m < best) {
                    best = m;
                }
            }
            best
        })
        .collect();
    // keep the merge tree's membership; ids ordered by medoid
    let mut order: Vec<usize> = (0..medoids.len()).collect();
    order.sort_by_key(|&c| medoids[c]);
    let live_clusters: Vec<&Vec<usize>> = clusters.iter().flatten().collect();
    let mut assignments = vec![0; n];
    let mut total = 0.0;
    let mut sorted_medoids = Vec::with_capacity(k);
    for (id, &c) in order.iter().enumerate() {
        sorted_medoids.push(medoids[c]);
        for &j in live_clusters[c] {
            assignments[j] = id;
            total += dissimilarity(sim, medoids[c], j);
        }
    }
    let cost = total;
    let mut out = Clustering::from_parts(sim.task_ids().to_vec(), assignments, sorted_medoids, cost, seed)?;
    out.trace = vec![cost];
    Ok(out)
}

/// Category shares per cluster; zero shares are left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryDistribution {
    pub categories: Vec<String>,
    pub sizes: Vec<usize>,
    pub rows: Vec<BTreeMap<String, f64>>,
}

fn labels_for(clustering: &Clustering, labels: &BTreeMap<String, String>) -> Result<Vec<String>, ClusterError> {
    clustering
        .task_ids
        .iter()
        .map(|id| labels.get(id).cloned().ok_or_else(|| ClusterError::IdMismatch(id.clone())))
        .collect()
}

pub fn category_distribution(clustering: &Clustering, corpus: &Corpus) -> Result<CategoryDistribution, ClusterError> {
    let labels: BTreeMap<String, String> = corpus.tasks().iter().map(|t| (t.id.clone(), t.category.clone())).collect();
    if let Some(t) = corpus.tasks().iter().find(|t| !clustering.task_ids.contains(&t.id)) {
        return Err(ClusterError::IdMismatch(t.id.clone()));
    }
    let per_task = labels_for(clustering, &labels)?;
    let mut counts: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); clustering.k];
    for (c, label) in clustering.assignments.iter().zip(&per_task) {
        *counts[*c].entry(label.clone()).or_insert(0) += 1;
    }
    let sizes = clustering.sizes();
    let rows = counts
        .iter()
        .zip(&sizes)
        .map(|(m, &size)| m.iter().map(|(cat, &n)| (cat.clone(), n as f64 / size as f64)).collect())
        .collect();
    Ok(CategoryDistribution { categories: corpus.category_counts().keys().cloned().collect(), sizes, rows })
}

/// Share of tasks that carry their cluster's majority category.
pub fn purity(clustering: &Clustering, labels: &BTreeMap<String, String>) -> Result<f64, ClusterError> {
    let per_task = labels_for(clustering, labels)?;
    let mut counts: Vec<BTreeMap<&str, usize>> = vec![BTreeMap::new(); clustering.k];
    for (c, label) in clustering.assignments.iter().zip(&per_task) {
        *counts[*c].entry(label.as_str()).or_insert(0) += 1;
    }
    let majority: usize = counts.iter().map(|m| m.values().copied().max().unwrap_or(0)).sum();
    Ok(majority as f64 / per_task.len().max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semsim::Measure;
    use alloc::format;
    use alloc::string::ToString;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("t{i}")).collect()
    }

    fn blocks() -> SimilarityMatrix {
        // {0, 2, 4} and {1, 3, 5}
        SimilarityMatrix::from_fn(ids(6), Measure::RequiredAction, |i, j| if i % 2 == j % 2 { 1.0 } else { 0.0 })
    }

    #[test]
    fn two_blocks_recovered() {
        for algo in [0, 1] {
            let c = if algo == 0 { k_medoids(&blocks(), 2, 3, 100) } else { agglomerative(&blocks(), 2, 3) }.unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(c.assignments[i] == c.assignments[j], i % 2 == j % 2);
                }
            }
            assert_eq!(c.total_dissimilarity, 0.0);
        }
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let sim = SimilarityMatrix::from_fn(ids(5), Measure::Comprehensibility, |i, j| 1.0 / (1.0 + (i + j) as f64));
        let c = k_medoids(&sim, 5, 0, 100).unwrap();
        assert_eq!(c.assignments, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.total_dissimilarity, 0.0);
        assert_eq!(k_medoids(&sim, 1, 0, 10), Err(ClusterError::KOutOfRange { k: 1, n: 5 }));
        assert_eq!(k_medoids(&sim, 6, 0, 10), Err(ClusterError::KOutOfRange { k: 6, n: 5 }));
    }

    #[test]
    fn medoids_stay_in_their_clusters_with_duplicates() {
        let sim = SimilarityMatrix::from_fn(ids(4), Measure::RequiredAction, |_, _| 1.0);
        let c = k_medoids(&sim, 2, 9, 100).unwrap();
        for (cl, &m) in c.medoids.iter().enumerate() {
            assert_eq!(c.assignments[m], cl);
        }
    }

    #[test]
    fn purity_hand_values() {
        let c = Clustering::from_parts(ids(6), vec![0, 0, 0, 1, 1, 1], vec![0, 3], 0.0, 0).unwrap();
        let labels: BTreeMap<String, String> = ids(6)
            .into_iter()
            .zip(["a", "a", "b", "c", "c", "c"])
            .map(|(i, l)| (i, l.to_string()))
            .collect();
        assert!((purity(&c, &labels).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        let one = Clustering::from_parts(ids(6), vec![0; 6], vec![0], 0.0, 0).unwrap();
        assert_eq!(purity(&one, &labels).unwrap(), 0.5);
        let mut missing = labels.clone();
        missing.remove("t5");
        assert_eq!(purity(&c, &missing), Err(ClusterError::IdMismatch("t5".into())));
    }

    #[test]
    fn from_parts_validates() {
        assert!(Clustering::from_parts(ids(3), vec![0, 2, 2], vec![0, 1], 0.0, 0).is_err());
        assert!(Clustering::from_parts(ids(3), vec![0, 1, 1], vec![1, 2], 0.0, 0).is_err());
        assert!(Clustering::from_parts(ids(3), vec![0, 1, 1], vec![0, 2], 0.0, 0).is_ok());
    }
}
