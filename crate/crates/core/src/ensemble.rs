//! Hard and soft voting over heterogeneous fitted classifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{predict, Classifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VotingMode {
    /// Weighted count of member predictions.
    #[default]
    Hard,
    /// Weighted mean of member probability vectors.
    Soft,
}

impl FromStr for VotingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hard" => Ok(Self::Hard),
            "soft" => Ok(Self::Soft),
            other => Err(Error::Config(format!("unknown voting mode {other:?}"))),
        }
    }
}

impl fmt::Display for VotingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hard => "hard",
            Self::Soft => "soft",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VotingEnsemble<M> {
    members: Vec<M>,
    mode: VotingMode,
    weights: Vec<f64>,
    n_classes: usize,
}

impl<M: Classifier> VotingEnsemble<M> {
    /// Checks the member invariants up front: at least one member, a common
    /// class count, one nonnegative weight per member, and probability
    /// support from every member in soft mode.
    pub fn new(members: Vec<M>, mode: VotingMode, weights: Option<Vec<f64>>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Config(
                "an ensemble needs at least one member".into(),
            ));
        };
        let n_classes = first.n_classes();
        if let Some(bad) = members.iter().find(|m| m.n_classes() != n_classes) {
            return Err(Error::Config(format!(
                "ensemble members disagree on class count ({n_classes} vs {})",
                bad.n_classes()
            )));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; members.len()]);
        if weights.len() != members.len() {
            return Err(Error::Config(format!(
                "{} weights given for {} members",
                weights.len(),
                members.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Config(
                "ensemble weights must be finite and nonnegative".into(),
            ));
        }
        if mode == VotingMode::Soft {
            if let Some(pos) = members.iter().position(|m| !m.supports_proba()) {
                return Err(Error::Config(format!(
                    "soft voting requires probabilities, member {pos} has no probability model"
                )));
            }
        }
        Ok(Self {
            members,
            mode,
            weights,
            n_classes,
        })
    }

    pub fn members(&self) -> &[M] {
        &self.members
    }

    pub fn mode(&self) -> VotingMode {
        self.mode
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted vote tally (hard) or weighted probability sum (soft) per class.
    pub fn tally(&self, x: &M::Input) -> Result<Vec<f64>> {
        let mut acc = vec![0.0; self.n_classes];
        match self.mode {
            VotingMode::Hard => {
                for (m, &w) in self.members.iter().zip(&self.weights) {
                    acc[m.predict(x)?] += w;
                }
            }
            VotingMode::Soft => {
                for (m, &w) in self.members.iter().zip(&self.weights) {
                    for (a, p) in acc.iter_mut().zip(m.predict_proba(x)?) {
                        *a += w * p;
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn predict(&self, x: &M::Input) -> Result<usize> {
        Ok(predict(&self.tally(x)?))
    }

    /// Weighted mean of member probabilities; soft mode only.
    pub fn predict_proba(&self, x: &M::Input) -> Result<Vec<f64>> {
        if self.mode != VotingMode::Soft {
            return Err(Error::HardVotingProba);
        }
        let total: f64 = self.weights.iter().sum();
        let mut acc = self.tally(x)?;
        if total > 0.0 {
            acc.iter_mut().for_each(|a| *a /= total);
        }
        Ok(acc)
    }
}

impl<M: Classifier> Classifier for VotingEnsemble<M> {
    type Input = M::Input;

    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn supports_proba(&self) -> bool {
        self.mode == VotingMode::Soft
    }

    fn decision(&self, x: &M::Input) -> Result<Vec<f64>> {
        self.tally(x)
    }

    fn predict_proba(&self, x: &M::Input) -> Result<Vec<f64>> {
        VotingEnsemble::predict_proba(self, x)
    }
}

/// Hard-vote reduction over already computed member predictions.
pub fn hard_vote(predictions: &[usize], weights: &[f64], n_classes: usize) -> usize {
    let mut acc = vec![0.0; n_classes];
    for (&p, &w) in predictions.iter().zip(weights) {
        acc[p] += w;
    }
    predict(&acc)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// A member with fixed outputs, for exercising the vote logic alone.
    #[derive(Debug, Clone)]
    pub(crate) struct Fixed {
        pub probs: Vec<f64>,
        pub has_proba: bool,
    }

    impl Fixed {
        pub fn voting(class: usize, n_classes: usize) -> Self {
            let mut probs = vec![0.0; n_classes];
            probs[class] = 1.0;
            Self {
                probs,
                has_proba: true,
            }
        }
    }

    impl Classifier for Fixed {
        type Input = ();

        fn n_classes(&self) -> usize {
            self.probs.len()
        }

        fn supports_proba(&self) -> bool {
            self.has_proba
        }

        fn decision(&self, _: &()) -> Result<Vec<f64>> {
            Ok(self.probs.clone())
        }

        fn predict_proba(&self, _: &()) -> Result<Vec<f64>> {
            if self.has_proba {
                Ok(self.probs.clone())
            } else {
                Err(Error::NoProbability("fixed"))
            }
        }
    }

    fn hard(preds: &[usize], c: usize) -> VotingEnsemble<Fixed> {
        let members = preds.iter().map(|&p| Fixed::voting(p, c)).collect();
        VotingEnsemble::new(members, VotingMode::Hard, None).unwrap()
    }

    fn soft(probs: &[&[f64]], weights: Option<Vec<f64>>) -> VotingEnsemble<Fixed> {
        let members = probs
            .iter()
            .map(|p| Fixed {
                probs: p.to_vec(),
                has_proba: true,
            })
            .collect();
        VotingEnsemble::new(members, VotingMode::Soft, weights).unwrap()
    }

    #[test]
    fn hard_majority_and_tie() {
        assert_eq!(hard(&[1, 1, 0], 2).predict(&()).unwrap(), 1);
        assert_eq!(hard(&[0, 1], 2).predict(&()).unwrap(), 0);
        assert!(matches!(
            hard(&[0, 1], 2).predict_proba(&()),
            Err(Error::HardVotingProba)
        ));
    }

    #[test]
    fn soft_mean() {
        let e = soft(&[&[0.9, 0.1], &[0.2, 0.8]], None);
        let p = e.predict_proba(&()).unwrap();
        assert!((p[0] - 0.55).abs() < 1e-12 && (p[1] - 0.45).abs() < 1e-12);
        assert_eq!(e.predict(&()).unwrap(), 0);

        let single = soft(&[&[0.3, 0.7]], None);
        assert_eq!(single.predict_proba(&()).unwrap(), vec![0.3, 0.7]);

        let weighted = soft(&[&[0.9, 0.1], &[0.2, 0.8]], Some(vec![2.0, 0.0]));
        let p = weighted.predict_proba(&()).unwrap();
        assert!((p[0] - 0.9).abs() < 1e-12 && (p[1] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn construction_errors() {
        let hinge_like = Fixed {
            probs: vec![1.0, 0.0],
            has_proba: false,
        };
        let err =
            VotingEnsemble::new(vec![hinge_like.clone()], VotingMode::Soft, None).unwrap_err();
        assert!(err.to_string().contains("no probability model"));
        assert!(VotingEnsemble::new(vec![hinge_like.clone()], VotingMode::Hard, None).is_ok());
        assert!(VotingEnsemble::<Fixed>::new(vec![], VotingMode::Hard, None).is_err());
        let mixed = vec![Fixed::voting(0, 2), Fixed::voting(0, 3)];
        assert!(VotingEnsemble::new(mixed, VotingMode::Hard, None).is_err());
        let members = vec![Fixed::voting(0, 2), Fixed::voting(1, 2)];
        assert!(VotingEnsemble::new(members.clone(), VotingMode::Hard, Some(vec![1.0])).is_err());
        assert!(VotingEnsemble::new(members, VotingMode::Hard, Some(vec![1.0, -1.0])).is_err());
    }

    #[test]
    fn unanimity_both_modes() {
        for c in 0..6 {
            let e = hard(&[c, c, c], 6);
            assert_eq!(e.predict(&()).unwrap(), c);
            let members = vec![Fixed::voting(c, 6); 3];
            let s = VotingEnsemble::new(members, VotingMode::Soft, None).unwrap();
            assert_eq!(s.predict(&()).unwrap(), c);
        }
    }

    #[test]
    fn weight_scaling_invariance() {
        let probs: [&[f64]; 3] = [&[0.2, 0.5, 0.3], &[0.6, 0.1, 0.3], &[0.1, 0.1, 0.8]];
        let base = vec![1.0, 2.0, 0.5];
        for k in [0.25, 3.0, 1e3] {
            let scaled: Vec<f64> = base.iter().map(|w| w * k).collect();
            assert_eq!(
                soft(&probs, Some(base.clone())).predict(&()).unwrap(),
                soft(&probs, Some(scaled)).predict(&()).unwrap()
            );
        }
    }
}
