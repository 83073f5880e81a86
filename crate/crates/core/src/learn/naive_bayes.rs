use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{ln, softmax};

/// Gaussian naive Bayes with maximum-likelihood variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub log_priors: Vec<f64>,
    /// Per class, per feature.
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

impl GaussianNb {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, variance_floor: f64) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let mut counts = vec![0usize; n_classes];
        let mut means = vec![vec![0.0; d]; n_classes];
        for (row, &c) in rows.iter().zip(labels) {
            counts[c] += 1;
            for (m, v) in means[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        for (m, &n) in means.iter_mut().zip(&counts) {
            m.iter_mut().for_each(|v| *v /= n.max(1) as f64);
        }
        let mut variances = vec![vec![0.0; d]; n_classes];
        for (row, &c) in rows.iter().zip(labels) {
            for j in 0..d {
                let diff = row[j] - means[c][j];
                variances[c][j] += diff * diff;
            }
        }
        for (vars, &n) in variances.iter_mut().zip(&counts) {
            vars.iter_mut().for_each(|v| *v = (*v / n.max(1) as f64).max(variance_floor));
        }
        let total = rows.len() as f64;
        let log_priors = counts.iter().map(|&n| ln(n as f64 / total)).collect();
        Self { log_priors, means, variances }
    }

    pub fn log_joint(&self, x: &[f64]) -> Vec<f64> {
        const LN_2PI: f64 = 1.837_877_066_409_345_5;
        (0..self.log_priors.len())
            .map(|c| {
                let mut s = self.log_priors[c];
                for ((&xj, &m), &v) in x.iter().zip(&self.means[c]).zip(&self.variances[c]) {
                    let diff = xj - m;
                    s -= 0.5 * (LN_2PI + ln(v)) + diff * diff / (2.0 * v);
                }
                s
            })
            .collect()
    }

    pub fn posteriors(&self, x: &[f64]) -> Vec<f64> {
        let mut p = self.log_joint(x);
        softmax(&mut p);
        p
    }
}

/// Multinomial naive Bayes over non-negative term weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNb {
    pub log_priors: Vec<f64>,
    /// Per class, per feature: log of the smoothed term probability.
    pub log_probs: Vec<Vec<f64>>,
}

impl MultinomialNb {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], n_classes: usize, alpha: f64) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let mut counts = vec![0usize; n_classes];
        let mut mass = vec![vec![0.0; d]; n_classes];
        for (row, &c) in rows.iter().zip(labels) {
            counts[c] += 1;
            for (m, v) in mass[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        let log_probs = mass
            .iter()
            .map(|m| {
                let total: f64 = m.iter().sum::<f64>() + alpha * d as f64;
                m.iter().map(|v| ln((v + alpha) / total)).collect()
            })
            .collect();
        let n = rows.len() as f64;
        Self { log_priors: counts.iter().map(|&c| ln(c as f64 / n)).collect(), log_probs }
    }

    pub fn posteriors(&self, x: &[f64]) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .log_priors
            .iter()
            .zip(&self.log_probs)
            .map(|(lp, probs)| lp + x.iter().zip(probs).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        softmax(&mut p);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[f64]) -> Vec<Vec<f64>> {
        v.iter().map(|x| vec![*x]).collect()
    }

    #[test]
    fn gaussian_posterior_matches_hand_computation() {
        // class 0: -1, 0, 1 (mean 0, var 2/3); class 1: 9, 10, 11 (mean 10, var 2/3)
        let x = rows(&[-1.0, 0.0, 1.0, 9.0, 10.0, 11.0]);
        let nb = GaussianNb::fit(&x, &[0, 0, 0, 1, 1, 1], 2, 1e-9);
        assert!((nb.means[0][0] - 0.0).abs() < 1e-12);
        assert!((nb.variances[1][0] - 2.0 / 3.0).abs() < 1e-12);
        // equal priors and variances: log-odds = ((x-10)^2 - x^2) / (2 var)
        let xq: f64 = 1.0;
        let var = 2.0 / 3.0;
        let log_odds = ((xq - 10.0).powi(2) - xq.powi(2)) / (2.0 * var);
        let p0 = 1.0 / (1.0 + libm::exp(-log_odds));
        let p = nb.posteriors(&[xq]);
        assert!((p[0] - p0).abs() < 1e-9);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-9);

        // a point between the classes with unequal priors
        let nb = GaussianNb::fit(&rows(&[0.0, 2.0, 4.0, 6.0, 10.0, 12.0]), &[0, 0, 0, 0, 1, 1], 2, 1e-9);
        let (m0, v0, m1, v1) = (3.0, 5.0, 11.0, 1.0);
        let xq: f64 = 7.0;
        let lj0 = libm::log(4.0 / 6.0) - 0.5 * libm::log(2.0 * core::f64::consts::PI * v0) - (xq - m0).powi(2) / (2.0 * v0);
        let lj1 = libm::log(2.0 / 6.0) - 0.5 * libm::log(2.0 * core::f64::consts::PI * v1) - (xq - m1).powi(2) / (2.0 * v1);
        let p0 = libm::exp(lj0) / (libm::exp(lj0) + libm::exp(lj1));
        let p = nb.posteriors(&[xq]);
        assert!((p[0] - p0).abs() < 1e-9, "{} vs {p0}", p[0]);
    }

    #[test]
    fn variance_floor_applies_to_constant_features() {
        let nb = GaussianNb::fit(&rows(&[1.0, 1.0, 2.0, 3.0]), &[0, 0, 1, 1], 2, 1e-6);
        assert_eq!(nb.variances[0][0], 1e-6);
        let p = nb.posteriors(&[5.0]);
        assert!(p.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn multinomial_prefers_class_with_matching_terms() {
        let x = vec![vec![1.0, 0.0, 0.0], vec![0.8, 0.2, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.3, 0.7]];
        let nb = MultinomialNb::fit(&x, &[0, 0, 1, 1], 2, 1.0);
        let p = nb.posteriors(&[1.0, 0.0, 0.0]);
        assert!(p[0] > p[1]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // smoothed probabilities form a distribution
        for lp in &nb.log_probs {
            let s: f64 = lp.iter().map(|v| libm::exp(*v)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
