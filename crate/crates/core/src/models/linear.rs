//! Linear classifiers trained by plain per-sample SGD.
//!
//! Objective per binary problem, with targets in {-1, +1}:
//! `(1/N) Σ loss(y_i, w·x_i + b) + l2_alpha · ||w||² / 2`.
//! Multiclass problems are reduced one-vs-rest.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training_set, normalize_ovr, sigmoid, TrainConfig};
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Logistic,
    Hinge,
}

impl Loss {
    pub fn value(self, y: f64, z: f64) -> f64 {
        let m = y * z;
        match self {
            Loss::Logistic => {
                if m > 0.0 {
                    (-m).exp().ln_1p()
                } else {
                    -m + m.exp().ln_1p()
                }
            }
            Loss::Hinge => (1.0 - m).max(0.0),
        }
    }

    /// Derivative of `value` with respect to the margin `z`. For hinge loss
    /// this is the subgradient taking 0 at the kink.
    pub fn dz(self, y: f64, z: f64) -> f64 {
        let m = y * z;
        match self {
            Loss::Logistic => -y * sigmoid(-m),
            Loss::Hinge => {
                if m < 1.0 {
                    -y
                } else {
                    0.0
                }
            }
        }
    }
}

/// One weight row per binary problem: a single row when `C = 2`, `C` rows
/// (one-vs-rest) otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    loss: Loss,
    n_classes: usize,
    config: TrainConfig,
}

impl LinearModel {
    /// An untrained model with all parameters zero.
    pub fn zeros(n_features: usize, n_classes: usize, loss: Loss, config: TrainConfig) -> Self {
        let rows = if n_classes == 2 { 1 } else { n_classes };
        Self {
            weights: vec![vec![0.0; n_features]; rows],
            bias: vec![0.0; rows],
            loss,
            n_classes,
            config,
        }
    }

    pub fn loss(&self) -> Loss {
        self.loss
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    fn margins(&self, x: &SparseVector) -> Result<Vec<f64>> {
        x.check_dim(self.n_features())?;
        Ok(self
            .weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| x.dot_dense(w) + b)
            .collect())
    }
}

pub fn sgd_fit_linear(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    loss: Loss,
    cfg: &TrainConfig,
) -> Result<LinearModel> {
    if n_classes < 2 {
        return Err(Error::Config(
            "linear models need at least two classes".into(),
        ));
    }
    let dim = check_training_set(x, y, n_classes)?;
    let mut model = LinearModel::zeros(dim, n_classes, loss, *cfg);
    for (row, (w, b)) in model
        .weights
        .iter_mut()
        .zip(model.bias.iter_mut())
        .enumerate()
    {
        let positive = if n_classes == 2 { 1 } else { row };
        let targets: Vec<f64> = y
            .iter()
            .map(|&c| if c == positive { 1.0 } else { -1.0 })
            .collect();
        fit_binary(x, &targets, loss, cfg, w, b);
    }
    Ok(model)
}

// Weight vector kept as `scale * v` so the L2 shrink step is O(1).
fn fit_binary(
    x: &[SparseVector],
    targets: &[f64],
    loss: Loss,
    cfg: &TrainConfig,
    w: &mut [f64],
    b: &mut f64,
) {
    let lr0 = cfg.learning_rate;
    let alpha = cfg.l2_alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut scale = 1.0;
    let mut t = 0u64;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = lr0 / (1.0 + lr0 * alpha * t as f64);
            let z = scale * x[i].dot_dense(w) + *b;
            let g = loss.dz(targets[i], z);
            scale *= (1.0 - eta * alpha).max(1e-9);
            if g != 0.0 {
                let step = eta * g / scale;
                for (j, v) in x[i].iter() {
                    w[j] -= step * v;
                }
                *b -= eta * g;
            }
            if scale < 1e-9 {
                w.iter_mut().for_each(|v| *v *= scale);
                scale = 1.0;
            }
            t += 1;
        }
    }
    if scale != 1.0 {
        w.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Length-`C` margins. Binary models report `(-z, z)`.
pub fn linear_decision(model: &LinearModel, x: &SparseVector) -> Result<Vec<f64>> {
    let m = model.margins(x)?;
    Ok(if model.n_classes == 2 {
        vec![-m[0], m[0]]
    } else {
        m
    })
}

/// Class probabilities; only logistic models have them.
pub fn linear_proba(model: &LinearModel, x: &SparseVector) -> Result<Vec<f64>> {
    if model.loss != Loss::Logistic {
        return Err(Error::NoProbability("hinge-loss linear model"));
    }
    let m = model.margins(x)?;
    if model.n_classes == 2 {
        let p = sigmoid(m[0]);
        return Ok(vec![1.0 - p, p]);
    }
    Ok(normalize_ovr(m.into_iter().map(sigmoid).collect()))
}

/// Full-batch objective of a single binary problem.
pub fn linear_objective(
    w: &[f64],
    b: f64,
    x: &[SparseVector],
    targets: &[f64],
    loss: Loss,
    l2_alpha: f64,
) -> f64 {
    let n = x.len() as f64;
    let data: f64 = x
        .iter()
        .zip(targets)
        .map(|(xi, &yi)| loss.value(yi, xi.dot_dense(w) + b))
        .sum();
    data / n + 0.5 * l2_alpha * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`linear_objective`] with respect to `(w, b)`.
pub fn linear_gradient(
    w: &[f64],
    b: f64,
    x: &[SparseVector],
    targets: &[f64],
    loss: Loss,
    l2_alpha: f64,
) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw: Vec<f64> = w.iter().map(|v| l2_alpha * v).collect();
    let mut gb = 0.0;
    for (xi, &yi) in x.iter().zip(targets) {
        let g = loss.dz(yi, xi.dot_dense(w) + b) / n;
        for (j, v) in xi.iter() {
            gw[j] += g * v;
        }
        gb += g;
    }
    (gw, gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict;

    fn separable() -> (Vec<SparseVector>, Vec<usize>) {
        let x = vec![
            SparseVector::from_dense(&[0.0, -1.0]),
            SparseVector::from_dense(&[0.0, 1.0]),
        ];
        (x, vec![0, 1])
    }

    #[test]
    fn separable_points_are_fitted() {
        let (x, y) = separable();
        let cfg = TrainConfig {
            epochs: 100,
            ..TrainConfig::linear_default()
        };
        let m = sgd_fit_linear(&x, &y, 2, Loss::Logistic, &cfg).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(predict(&linear_decision(&m, xi).unwrap()), yi);
        }
    }

    #[test]
    fn zero_epochs_predicts_class_zero() {
        let (x, y) = separable();
        let cfg = TrainConfig {
            epochs: 0,
            ..TrainConfig::linear_default()
        };
        let m = sgd_fit_linear(&x, &y, 2, Loss::Logistic, &cfg).unwrap();
        assert!(m.weights()[0].iter().all(|&v| v == 0.0));
        for xi in &x {
            assert_eq!(predict(&linear_decision(&m, xi).unwrap()), 0);
            assert_eq!(linear_proba(&m, xi).unwrap(), vec![0.5, 0.5]);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let x: Vec<_> = (0..30)
            .map(|i| SparseVector::from_dense(&[(i % 7) as f64, (i % 3) as f64 - 1.0, 1.0]))
            .collect();
        let y: Vec<_> = (0..30).map(|i| i % 3).collect();
        let cfg = TrainConfig::linear_default();
        let a = sgd_fit_linear(&x, &y, 3, Loss::Hinge, &cfg).unwrap();
        let b = sgd_fit_linear(&x, &y, 3, Loss::Hinge, &cfg).unwrap();
        assert_eq!(
            bincode::serialize(&a).unwrap(),
            bincode::serialize(&b).unwrap()
        );
        assert_eq!(a.weights().len(), 3);
    }

    #[test]
    fn sigmoid_identity() {
        let mut m = LinearModel::zeros(1, 2, Loss::Logistic, TrainConfig::default());
        m.weights[0][0] = 1.0;
        let z = 0.7;
        let p = linear_proba(&m, &SparseVector::from_dense(&[z])).unwrap();
        assert!((p[1] - 1.0 / (1.0 + (-z).exp())).abs() < 1e-15);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hinge_has_no_probability() {
        let m = LinearModel::zeros(2, 2, Loss::Hinge, TrainConfig::default());
        let err = linear_proba(&m, &SparseVector::zeros(2)).unwrap_err();
        assert!(err.to_string().contains("no probability model"));
    }

    #[test]
    fn unknown_class_rejected() {
        let (x, _) = separable();
        assert!(sgd_fit_linear(&x, &[0, 2], 2, Loss::Logistic, &TrainConfig::default()).is_err());
    }

    #[test]
    fn ovr_probabilities_sum_to_one() {
        let x: Vec<_> = (0..12)
            .map(|i| SparseVector::from_dense(&[(i % 4) as f64, 1.0]))
            .collect();
        let y: Vec<_> = (0..12).map(|i| i % 4).collect();
        let m = sgd_fit_linear(&x, &y, 4, Loss::Logistic, &TrainConfig::default()).unwrap();
        for xi in &x {
            let p = linear_proba(&m, xi).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
