//! Natively implemented classifiers over sparse feature vectors.
//!
//! Every model predicts by argmax over a length-`C` score vector, breaking
//! ties toward the lowest class id.

mod gbdt;
mod linear;
mod mlp;
mod nb;

pub use gbdt::{gbdt_fit, gbdt_predict_proba, GbdtModel, RegressionTree, TreeNode};
pub use linear::{
    linear_decision, linear_gradient, linear_objective, linear_proba, sgd_fit_linear, LinearModel,
    Loss,
};
pub use mlp::{mlp_fit, mlp_forward, mlp_loss, mlp_loss_and_grad, MlpGradients, MlpModel};
pub use nb::{nb_fit, nb_log_posterior, NaiveBayesModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Training hyperparameters shared by all model families. Each family reads
/// the fields it needs; see the `*_default` constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2_alpha: f64,
    pub seed: u64,
    pub hidden_size: usize,
    pub batch_size: usize,
    pub n_rounds: usize,
    pub max_depth: usize,
    pub n_bins: usize,
    pub min_leaf: usize,
}

impl TrainConfig {
    const BASE: TrainConfig = TrainConfig {
        epochs: 20,
        learning_rate: 0.1,
        l2_alpha: 1e-4,
        seed: 42,
        hidden_size: 100,
        batch_size: 32,
        n_rounds: 100,
        max_depth: 6,
        n_bins: 64,
        min_leaf: 20,
    };

    pub fn linear_default() -> Self {
        Self::BASE
    }

    pub fn mlp_default() -> Self {
        Self {
            epochs: 50,
            learning_rate: 0.01,
            ..Self::BASE
        }
    }

    pub fn gbdt_default() -> Self {
        Self::BASE
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::BASE
    }
}

/// Common prediction surface. `Input` is whatever the model consumes: a
/// feature vector for bare models, or a set of feature views for models
/// bound to a featurizer.
pub trait Classifier {
    type Input: ?Sized;

    fn n_classes(&self) -> usize;

    fn supports_proba(&self) -> bool;

    /// Scores whose argmax is the prediction.
    fn decision(&self, x: &Self::Input) -> Result<Vec<f64>>;

    fn predict_proba(&self, x: &Self::Input) -> Result<Vec<f64>>;

    fn predict(&self, x: &Self::Input) -> Result<usize> {
        Ok(predict(&self.decision(x)?))
    }
}

/// Argmax with ties broken toward the lowest index. NaN never wins.
pub fn predict(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] || scores[best].is_nan() && !s.is_nan() {
            best = i;
        }
    }
    best
}

/// Any fitted model from this module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Model {
    NaiveBayes(NaiveBayesModel),
    Linear(LinearModel),
    Mlp(MlpModel),
    Gbdt(GbdtModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::NaiveBayes(_) => "naive_bayes",
            Model::Linear(m) => match m.loss() {
                Loss::Logistic => "linear_logistic",
                Loss::Hinge => "linear_hinge",
            },
            Model::Mlp(_) => "mlp",
            Model::Gbdt(_) => "gbdt",
        }
    }
}

impl Classifier for Model {
    type Input = SparseVector;

    fn n_classes(&self) -> usize {
        match self {
            Model::NaiveBayes(m) => m.n_classes(),
            Model::Linear(m) => m.n_classes(),
            Model::Mlp(m) => m.n_classes(),
            Model::Gbdt(m) => m.n_classes(),
        }
    }

    fn supports_proba(&self) -> bool {
        !matches!(self, Model::Linear(m) if m.loss() == Loss::Hinge)
    }

    fn decision(&self, x: &SparseVector) -> Result<Vec<f64>> {
        match self {
            Model::NaiveBayes(m) => nb_log_posterior(m, x),
            Model::Linear(m) => linear_decision(m, x),
            Model::Mlp(m) => mlp_forward(m, x),
            Model::Gbdt(m) => gbdt_predict_proba(m, x),
        }
    }

    fn predict_proba(&self, x: &SparseVector) -> Result<Vec<f64>> {
        match self {
            Model::NaiveBayes(m) => m.predict_proba(x),
            Model::Linear(m) => linear_proba(m, x),
            Model::Mlp(m) => mlp_forward(m, x),
            Model::Gbdt(m) => gbdt_predict_proba(m, x),
        }
    }
}

pub(crate) fn check_training_set(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Empty("training set has no samples"));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&l| l >= n_classes) {
        return Err(Error::UnknownLabel(bad.to_string()));
    }
    let dim = x[0].dim();
    for v in x {
        v.check_dim(dim)?;
    }
    Ok(dim)
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Normalizes nonnegative one-vs-rest scores to sum to one; uniform if
/// they all vanish.
pub(crate) fn normalize_ovr(mut probs: Vec<f64>) -> Vec<f64> {
    let sum: f64 = probs.iter().sum();
    if sum > 0.0 {
        probs.iter_mut().for_each(|p| *p /= sum);
    } else {
        let u = 1.0 / probs.len() as f64;
        probs.iter_mut().for_each(|p| *p = u);
    }
    probs
}
