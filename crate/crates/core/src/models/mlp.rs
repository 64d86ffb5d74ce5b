//! One-hidden-layer perceptron: rectifier hidden units, softmax output,
//! cross-entropy loss, minibatch SGD.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_training_set, softmax, TrainConfig};
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    n_features: usize,
    hidden: usize,
    n_classes: usize,
    // input weights stored feature-major (D × H) so a sparse input touches
    // contiguous rows
    w1: Vec<f64>,
    b1: Vec<f64>,
    // C × H
    w2: Vec<f64>,
    b2: Vec<f64>,
}

/// Gradients of the mean cross-entropy over a batch. Input-weight rows are
/// only present for features that occur in the batch.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MlpGradients {
    pub w1_rows: HashMap<usize, Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpGradients {
    /// Dense gradient in the parameter order of [`MlpModel::params_mut`].
    pub fn to_dense(&self, model: &MlpModel) -> Vec<f64> {
        let h = model.hidden;
        let mut w1 = vec![0.0; model.w1.len()];
        for (&j, row) in &self.w1_rows {
            w1[j * h..(j + 1) * h].copy_from_slice(row);
        }
        w1.into_iter()
            .chain(self.b1.iter().copied())
            .chain(self.w2.iter().copied())
            .chain(self.b2.iter().copied())
            .collect()
    }
}

struct Activations {
    pre: Vec<f64>,
    hidden: Vec<f64>,
    probs: Vec<f64>,
}

impl MlpModel {
    pub fn zeros(n_features: usize, hidden: usize, n_classes: usize) -> Self {
        Self {
            n_features,
            hidden,
            n_classes,
            w1: vec![0.0; n_features * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; n_classes * hidden],
            b2: vec![0.0; n_classes],
        }
    }

    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero.
    pub fn init(n_features: usize, hidden: usize, n_classes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Self::zeros(n_features, hidden, n_classes);
        let r1 = 1.0 / (n_features.max(1) as f64).sqrt();
        m.w1.iter_mut().for_each(|w| *w = rng.gen_range(-r1..=r1));
        let r2 = 1.0 / (hidden as f64).sqrt();
        m.w2.iter_mut().for_each(|w| *w = rng.gen_range(-r2..=r2));
        m
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden
    }

    /// Flat view of every parameter, in the order w1, b1, w2, b2.
    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w1
            .iter_mut()
            .chain(self.b1.iter_mut())
            .chain(self.w2.iter_mut())
            .chain(self.b2.iter_mut())
    }

    fn activations(&self, x: &SparseVector) -> Activations {
        let h = self.hidden;
        let mut pre = self.b1.clone();
        for (j, v) in x.iter() {
            for (a, w) in pre.iter_mut().zip(&self.w1[j * h..(j + 1) * h]) {
                *a += v * w;
            }
        }
        let hidden: Vec<f64> = pre.iter().map(|&a| a.max(0.0)).collect();
        let logits: Vec<f64> = (0..self.n_classes)
            .map(|c| {
                let row = &self.w2[c * h..(c + 1) * h];
                self.b2[c] + row.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>()
            })
            .collect();
        Activations {
            pre,
            hidden,
            probs: softmax(&logits),
        }
    }

    fn accumulate(&self, x: &SparseVector, y: usize, scale: f64, grads: &mut MlpGradients) -> f64 {
        let h = self.hidden;
        let act = self.activations(x);
        let loss = -act.probs[y].max(f64::MIN_POSITIVE).ln();
        let mut delta_hidden = vec![0.0; h];
        for c in 0..self.n_classes {
            let d = (act.probs[c] - if c == y { 1.0 } else { 0.0 }) * scale;
            grads.b2[c] += d;
            let row = &self.w2[c * h..(c + 1) * h];
            let grow = &mut grads.w2[c * h..(c + 1) * h];
            for k in 0..h {
                grow[k] += d * act.hidden[k];
                delta_hidden[k] += d * row[k];
            }
        }
        for ((d, &pre), g) in delta_hidden.iter_mut().zip(&act.pre).zip(&mut grads.b1) {
            if pre <= 0.0 {
                *d = 0.0;
            }
            *g += *d;
        }
        for (j, v) in x.iter() {
            let row = grads.w1_rows.entry(j).or_insert_with(|| vec![0.0; h]);
            for (g, d) in row.iter_mut().zip(&delta_hidden) {
                *g += v * d;
            }
        }
        loss
    }

    fn empty_gradients(&self) -> MlpGradients {
        MlpGradients {
            w1_rows: HashMap::new(),
            b1: vec![0.0; self.hidden],
            w2: vec![0.0; self.w2.len()],
            b2: vec![0.0; self.n_classes],
        }
    }

    fn apply(&mut self, grads: &MlpGradients, lr: f64) {
        let h = self.hidden;
        for (&j, row) in &grads.w1_rows {
            for (w, g) in self.w1[j * h..(j + 1) * h].iter_mut().zip(row) {
                *w -= lr * g;
            }
        }
        for (w, g) in self.b1.iter_mut().zip(&grads.b1) {
            *w -= lr * g;
        }
        for (w, g) in self.w2.iter_mut().zip(&grads.w2) {
            *w -= lr * g;
        }
        for (w, g) in self.b2.iter_mut().zip(&grads.b2) {
            *w -= lr * g;
        }
    }
}

/// Class probabilities.
pub fn mlp_forward(model: &MlpModel, x: &SparseVector) -> Result<Vec<f64>> {
    x.check_dim(model.n_features)?;
    Ok(model.activations(x).probs)
}

/// Mean cross-entropy over a batch.
pub fn mlp_loss(model: &MlpModel, x: &[SparseVector], y: &[usize]) -> f64 {
    let total: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| -model.activations(xi).probs[yi].max(f64::MIN_POSITIVE).ln())
        .sum();
    total / x.len() as f64
}

/// Mean cross-entropy and its gradient over a batch.
pub fn mlp_loss_and_grad(model: &MlpModel, x: &[SparseVector], y: &[usize]) -> (f64, MlpGradients) {
    let mut grads = model.empty_gradients();
    let scale = 1.0 / x.len() as f64;
    let loss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| model.accumulate(xi, yi, scale, &mut grads))
        .sum();
    (loss * scale, grads)
}

pub fn mlp_fit(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    cfg: &TrainConfig,
) -> Result<MlpModel> {
    if cfg.hidden_size == 0 {
        return Err(Error::Config("hidden_size must be at least 1".into()));
    }
    if cfg.batch_size == 0 {
        return Err(Error::Config("batch_size must be at least 1".into()));
    }
    let dim = check_training_set(x, y, n_classes)?;
    let mut model = MlpModel::init(dim, cfg.hidden_size, n_classes, cfg.seed);
    // separate stream so changing the epoch count never changes the init
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut order: Vec<usize> = (0..x.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            let mut grads = model.empty_gradients();
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                model.accumulate(&x[i], y[i], scale, &mut grads);
            }
            model.apply(&grads, cfg.learning_rate);
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict;

    #[test]
    fn zero_model_is_uniform() {
        let m = MlpModel::zeros(3, 4, 5);
        let p = mlp_forward(&m, &SparseVector::from_dense(&[1.0, 2.0, 3.0])).unwrap();
        assert!(p.iter().all(|&v| (v - 0.2).abs() < 1e-15));
    }

    #[test]
    fn learns_xor() {
        let x: Vec<_> = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
            .iter()
            .map(|r| SparseVector::from_dense(r))
            .collect();
        let y = vec![0, 1, 1, 0];
        let cfg = TrainConfig {
            hidden_size: 8,
            epochs: 2000,
            learning_rate: 0.5,
            ..TrainConfig::mlp_default()
        };
        let m = mlp_fit(&x, &y, 2, &cfg).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(predict(&mlp_forward(&m, xi).unwrap()), yi);
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let m = MlpModel::init(6, 5, 3, 7);
        let p = mlp_forward(
            &m,
            &SparseVector::from_dense(&[1.0, 0.0, -2.0, 0.5, 0.0, 3.0]),
        )
        .unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_config() {
        let x = vec![SparseVector::from_dense(&[1.0])];
        let cfg = TrainConfig {
            hidden_size: 0,
            ..TrainConfig::mlp_default()
        };
        assert!(mlp_fit(&x, &[0], 2, &cfg).is_err());
        assert!(mlp_fit(&x, &[3], 2, &TrainConfig::mlp_default()).is_err());
    }
}
