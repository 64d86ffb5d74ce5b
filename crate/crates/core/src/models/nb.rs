use serde::{Deserialize, Serialize};

use super::{check_training_set, softmax};
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Multinomial naive Bayes with additive smoothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    class_log_prior: Vec<f64>,
    // C × D, row-major
    feature_log_prob: Vec<f64>,
    n_features: usize,
    alpha: f64,
}

impl NaiveBayesModel {
    pub fn n_classes(&self) -> usize {
        self.class_log_prior.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn class_log_prior(&self) -> &[f64] {
        &self.class_log_prior
    }

    pub fn feature_log_prob(&self, class: usize) -> &[f64] {
        &self.feature_log_prob[class * self.n_features..(class + 1) * self.n_features]
    }

    pub fn predict_proba(&self, x: &SparseVector) -> Result<Vec<f64>> {
        Ok(softmax(&nb_log_posterior(self, x)?))
    }
}

/// Fits class priors `ln(n_c / N)` and smoothed feature log-probabilities
/// `ln((S_cj + alpha) / (S_c + alpha * D))`. Classes without samples get a
/// prior of `-inf`.
pub fn nb_fit(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    alpha: f64,
) -> Result<NaiveBayesModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Config(format!(
            "smoothing alpha must be positive, got {alpha}"
        )));
    }
    let dim = check_training_set(x, y, n_classes)?;
    let mut class_count = vec![0usize; n_classes];
    let mut sums = vec![0.0; n_classes * dim];
    for (v, &c) in x.iter().zip(y) {
        class_count[c] += 1;
        let row = &mut sums[c * dim..(c + 1) * dim];
        for (j, val) in v.iter() {
            if val < 0.0 {
                return Err(Error::NegativeFeature {
                    index: j,
                    value: val,
                });
            }
            row[j] += val;
        }
    }
    let n = x.len() as f64;
    let class_log_prior = class_count.iter().map(|&k| (k as f64 / n).ln()).collect();
    let mut feature_log_prob = sums;
    for row in feature_log_prob.chunks_mut(dim.max(1)).take(n_classes) {
        let total: f64 = row.iter().sum();
        let denom = (total + alpha * dim as f64).ln();
        row.iter_mut().for_each(|s| *s = (*s + alpha).ln() - denom);
    }
    Ok(NaiveBayesModel {
        class_log_prior,
        feature_log_prob,
        n_features: dim,
        alpha,
    })
}

/// `prior_c + Σ_j x_j · log p(j | c)` for every class.
pub fn nb_log_posterior(model: &NaiveBayesModel, x: &SparseVector) -> Result<Vec<f64>> {
    x.check_dim(model.n_features)?;
    Ok((0..model.n_classes())
        .map(|c| {
            let row = model.feature_log_prob(c);
            model.class_log_prior[c] + x.iter().map(|(j, v)| v * row[j]).sum::<f64>()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict;

    fn toy() -> NaiveBayesModel {
        let x = vec![
            SparseVector::from_pairs(2, vec![(0, 1.0)]).unwrap(),
            SparseVector::from_pairs(2, vec![(1, 1.0)]).unwrap(),
        ];
        nb_fit(&x, &[0, 1], 2, 1.0).unwrap()
    }

    #[test]
    fn closed_form() {
        let m = toy();
        let expected = [(2.0f64 / 3.0).ln(), (1.0f64 / 3.0).ln()];
        for (a, b) in m.feature_log_prob(0).iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        for c in 0..2 {
            let s: f64 = m.feature_log_prob(c).iter().map(|l| l.exp()).sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn single_class_prior_is_zero() {
        let x = vec![SparseVector::from_dense(&[1.0, 2.0])];
        let m = nb_fit(&x, &[0], 1, 1.0).unwrap();
        assert_eq!(m.class_log_prior(), &[0.0]);
    }

    #[test]
    fn heavy_smoothing_is_uniform() {
        let x = vec![
            SparseVector::from_dense(&[5.0, 0.0, 1.0]),
            SparseVector::from_dense(&[0.0, 7.0, 0.0]),
        ];
        let m = nb_fit(&x, &[0, 1], 2, 1e9).unwrap();
        for c in 0..2 {
            for &lp in m.feature_log_prob(c) {
                assert!((lp - (1.0f64 / 3.0).ln()).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn scoring() {
        let m = toy();
        let zero = nb_log_posterior(&m, &SparseVector::zeros(2)).unwrap();
        assert_eq!(zero, m.class_log_prior());

        let x = SparseVector::from_pairs(2, vec![(0, 3.0)]).unwrap();
        let s = nb_log_posterior(&m, &x).unwrap();
        // ln(1/2) + 3 ln(2/3) vs ln(1/2) + 3 ln(1/3)
        assert!((s[0] - (0.5f64.ln() + 3.0 * (2.0f64 / 3.0).ln())).abs() < 1e-12);
        assert_eq!(predict(&s), 0);

        let sym = SparseVector::from_pairs(2, vec![(0, 1.0), (1, 1.0)]).unwrap();
        assert_eq!(predict(&nb_log_posterior(&m, &sym).unwrap()), 0);

        assert!(nb_log_posterior(&m, &SparseVector::zeros(3)).is_err());
    }

    #[test]
    fn errors() {
        let neg = vec![SparseVector::from_dense(&[-1.0])];
        assert!(matches!(
            nb_fit(&neg, &[0], 2, 1.0),
            Err(Error::NegativeFeature { .. })
        ));
        assert!(nb_fit(&[], &[], 2, 1.0).is_err());
        let x = vec![SparseVector::from_dense(&[1.0])];
        assert!(nb_fit(&x, &[2], 2, 1.0).is_err());
    }

    #[test]
    fn absent_class_never_predicted() {
        let x = vec![SparseVector::from_dense(&[1.0, 0.0])];
        let m = nb_fit(&x, &[1], 3, 1.0).unwrap();
        let p = m
            .predict_proba(&SparseVector::from_dense(&[0.0, 4.0]))
            .unwrap();
        assert_eq!(p[0], 0.0);
        assert_eq!(p[2], 0.0);
        assert!((p[1] - 1.0).abs() < 1e-12);
    }
}
