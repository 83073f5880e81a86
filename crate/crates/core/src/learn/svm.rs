use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::LearnerConfig;
use crate::math::sqrt;
use crate::par::map_range;
use crate::rng::Rng;

/// Result of one binary SMO run. Decision value is `sum(a_i y_i K(i, x)) - b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySmo {
    pub alphas: Vec<f64>,
    pub b: f64,
    /// Full sweeps over the data that were executed.
    pub passes: usize,
    /// True when the last full sweep changed nothing.
    pub converged: bool,
}

struct Smo<'a> {
    k: &'a [f64],
    n: usize,
    y: &'a [f64],
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    b: f64,
    /// `u_i - y_i` for every training point.
    err: Vec<f64>,
    rng: Rng,
}

const EPS: f64 = 1e-10;

impl Smo<'_> {
    fn kij(&self, i: usize, j: usize) -> f64 {
        self.k[i * self.n + j]
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.err[i1], self.err[i2]);
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if y1 != y2 { ((a2 - a1).max(0.0), (c + a2 - a1).min(c)) } else { ((a1 + a2 - c).max(0.0), (a1 + a2).min(c)) };
        if hi - lo < EPS {
            return false;
        }
        let (k11, k12, k22) = (self.kij(i1, i1), self.kij(i1, i2), self.kij(i2, i2));
        let eta = k11 + k22 - 2.0 * k12;
        let mut new2 = if eta > EPS {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // objective at both ends of the segment
            let f1 = y1 * (e1 + self.b) - a1 * k11 - s * a2 * k12;
            let f2 = y2 * (e2 + self.b) - s * a1 * k12 - a2 * k22;
            let obj = |a: f64| {
                let a1n = a1 + s * (a2 - a);
                a1n * f1 + a * f2 + 0.5 * a1n * a1n * k11 + 0.5 * a * a * k22 + s * a * a1n * k12
            };
            let (lobj, hobj) = (obj(lo), obj(hi));
            if lobj < hobj - EPS {
                lo
            } else if lobj > hobj + EPS {
                hi
            } else {
                a2
            }
        };
        if (new2 - a2).abs() < EPS * (new2 + a2 + EPS) {
            return false;
        }
        let mut new1 = a1 + s * (a2 - new2);
        // snap to the box so bound tests stay exact
        let snap = |a: f64| if a < 1e-12 { 0.0 } else if a > c - 1e-12 * c { c } else { a };
        new1 = snap(new1);
        new2 = snap(new2);
        let (d1, d2) = (y1 * (new1 - a1), y2 * (new2 - a2));
        let b1 = e1 + d1 * k11 + d2 * k12 + self.b;
        let b2 = e2 + d1 * k12 + d2 * k22 + self.b;
        let new_b = if new1 > 0.0 && new1 < c {
            b1
        } else if new2 > 0.0 && new2 < c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        let db = new_b - self.b;
        for i in 0..self.n {
            self.err[i] += d1 * self.kij(i1, i) + d2 * self.kij(i2, i) - db;
        }
        self.alpha[i1] = new1;
        self.alpha[i2] = new2;
        self.b = new_b;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let e2 = self.err[i2];
        let r2 = e2 * y2;
        if !((r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        let n = self.n;
        let bound_free: Vec<usize> = (0..n).filter(|&i| self.non_bound(i)).collect();
        if bound_free.len() > 1 {
            // second-choice heuristic: maximize |E1 - E2|
            let mut best = bound_free[0];
            for &i in &bound_free {
                if (self.err[i] - e2).abs() > (self.err[best] - e2).abs() {
                    best = i;
                }
            }
            if self.take_step(best, i2) {
                return true;
            }
        }
        if !bound_free.is_empty() {
            let start = self.rng.below(bound_free.len());
            for off in 0..bound_free.len() {
                if self.take_step(bound_free[(start + off) % bound_free.len()], i2) {
                    return true;
                }
            }
        }
        let start = self.rng.below(n);
        for off in 0..n {
            if self.take_step((start + off) % n, i2) {
                return true;
            }
        }
        false
    }
}

/// Platt's SMO on a precomputed `n x n` kernel matrix (row-major) with
/// labels in `{-1, +1}`. `max_passes` caps the number of sweeps over all
/// points.
pub fn smo_binary(kernel: &[f64], y: &[f64], c: f64, tol: f64, max_passes: usize, seed: u64) -> BinarySmo {
    let n = y.len();
    assert_eq!(kernel.len(), n * n, "kernel must be n x n");
    let mut smo = Smo { k: kernel, n, y, c, tol, alpha: vec![0.0; n], b: 0.0, err: y.iter().map(|v| -v).collect(), rng: Rng::new(seed) };
    let mut examine_all = true;
    let mut passes = 0;
    let mut converged = false;
    // guards the inner loop over non-bound points against cycling
    let inner_cap = 50 * n.max(10);
    loop {
        let mut changed = 0usize;
        if examine_all {
            if passes == max_passes {
                break;
            }
            passes += 1;
            for i in 0..n {
                changed += smo.examine(i) as usize;
            }
            if changed == 0 {
                converged = true;
                break;
            }
            examine_all = false;
        } else {
            let mut rounds = 0;
            loop {
                changed = 0;
                for i in 0..n {
                    if smo.non_bound(i) {
                        changed += smo.examine(i) as usize;
                    }
                }
                rounds += 1;
                if changed == 0 || rounds >= inner_cap {
                    break;
                }
            }
            examine_all = true;
        }
    }
    BinarySmo { alphas: smo.alpha, b: smo.b, passes, converged }
}

/// Points whose multiplier breaks the KKT conditions by more than `tol`.
pub fn kkt_violations(kernel: &[f64], y: &[f64], alphas: &[f64], b: f64, c: f64, tol: f64) -> Vec<usize> {
    let n = y.len();
    (0..n)
        .filter(|&i| {
            let u: f64 = (0..n).map(|j| alphas[j] * y[j] * kernel[j * n + i]).sum::<f64>() - b;
            let r = y[i] * u - 1.0;
            let a = alphas[i];
            if a <= 0.0 {
                r < -tol
            } else if a >= c {
                r > tol
            } else {
                r.abs() > tol
            }
        })
        .collect()
}

/// One-vs-rest linear SVM on standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
    /// Per class: weight vector in standardized space and threshold.
    pub weights: Vec<Vec<f64>>,
    pub thresholds: Vec<f64>,
}

impl LinearSvm {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, config: &LearnerConfig, seed: u64) -> Self {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let means: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
        let scales: Vec<f64> = (0..d)
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - means[j]) * (r[j] - means[j])).sum::<f64>() / n as f64;
                let sd = sqrt(var);
                if sd > 1e-12 * (1.0 + means[j].abs()) { sd } else { 0.0 }
            })
            .collect();
        let z: Vec<Vec<f64>> = rows.iter().map(|r| standardize(r, &means, &scales)).collect();
        let gram_rows = map_range(n, |i| (0..n).map(|j| dot(&z[i], &z[j])).collect::<Vec<f64>>());
        let gram: Vec<f64> = gram_rows.into_iter().flatten().collect();
        let machines = map_range(n_classes, |c| {
            let y: Vec<f64> = labels.iter().map(|&l| if l == c { 1.0 } else { -1.0 }).collect();
            let m = smo_binary(&gram, &y, config.svm_c, config.svm_tol, config.svm_max_passes, seed.wrapping_add(c as u64));
            let mut w = vec![0.0; d];
            for (i, zi) in z.iter().enumerate() {
                let coef = m.alphas[i] * y[i];
                if coef != 0.0 {
                    w.iter_mut().zip(zi).for_each(|(wj, v)| *wj += coef * v);
                }
            }
            (w, m.b)
        });
        let (weights, thresholds) = machines.into_iter().unzip();
        Self { means, scales, weights, thresholds }
    }

    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        let z = standardize(x, &self.means, &self.scales);
        self.weights.iter().zip(&self.thresholds).map(|(w, b)| dot(w, &z) - b).collect()
    }
}

fn standardize(x: &[f64], means: &[f64], scales: &[f64]) -> Vec<f64> {
    x.iter().zip(means).zip(scales).map(|((v, m), s)| if *s > 0.0 { (v - m) / s } else { 0.0 }).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
