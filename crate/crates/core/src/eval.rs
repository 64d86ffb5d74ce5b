//! Accuracy, confusion matrices and per-class precision/recall/F1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, LabelScheme};
use crate::error::{Error, Result};
use crate::pipeline::FittedPipeline;

fn check_pair(preds: &[usize], golds: &[usize]) -> Result<()> {
    if preds.len() != golds.len() {
        return Err(Error::DimensionMismatch {
            expected: golds.len(),
            actual: preds.len(),
        });
    }
    if golds.is_empty() {
        return Err(Error::Empty("no predictions to score"));
    }
    Ok(())
}

pub fn accuracy(preds: &[usize], golds: &[usize]) -> Result<f64> {
    check_pair(preds, golds)?;
    let hits = preds.iter().zip(golds).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / golds.len() as f64)
}

/// `m[gold][pred]` counts.
pub fn confusion_matrix(
    preds: &[usize],
    golds: &[usize],
    n_classes: usize,
) -> Result<Vec<Vec<usize>>> {
    if preds.len() != golds.len() {
        return Err(Error::DimensionMismatch {
            expected: golds.len(),
            actual: preds.len(),
        });
    }
    let mut m = vec![vec![0; n_classes]; n_classes];
    for (&p, &g) in preds.iter().zip(golds) {
        if p >= n_classes || g >= n_classes {
            return Err(Error::UnknownLabel(p.max(g).to_string()));
        }
        m[g][p] += 1;
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub name: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when a ratio had a zero denominator and was reported as 0.
    #[serde(skip)]
    pub undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub n: usize,
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassMetrics>,
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn compute_metrics(preds: &[usize], golds: &[usize], scheme: LabelScheme) -> Result<Metrics> {
    check_pair(preds, golds)?;
    let confusion = confusion_matrix(preds, golds, scheme.n_classes())?;
    let per_class = scheme
        .class_names()
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let tp = confusion[c][c];
            let predicted: usize = confusion.iter().map(|row| row[c]).sum();
            let support: usize = confusion[c].iter().sum();
            let (precision, p_undef) = ratio(tp, predicted);
            let (recall, r_undef) = ratio(tp, support);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                name: name.to_string(),
                precision,
                recall,
                f1,
                undefined: p_undef || r_undef,
            }
        })
        .collect();
    Ok(Metrics {
        accuracy: accuracy(preds, golds)?,
        n: golds.len(),
        confusion,
        per_class,
    })
}

/// Scores a fitted pipeline on a labelled dataset.
pub fn evaluate(fp: &FittedPipeline, ds: &Dataset) -> Result<Metrics> {
    if ds.scheme.kind() != fp.config().scheme {
        return Err(Error::Config(format!(
            "dataset uses scheme {} but the model was trained on {}",
            ds.scheme.kind(),
            fp.config().scheme
        )));
    }
    let golds = ds.labels()?;
    let preds = fp.predict(&ds.texts());
    compute_metrics(&preds, &golds, ds.scheme)
}

impl Metrics {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics are always serializable")
    }

    pub fn class_support(&self) -> Vec<usize> {
        self.confusion.iter().map(|row| row.iter().sum()).collect()
    }

    /// Human-readable table; `*` marks ratios with a zero denominator.
    pub fn render_report(&self) -> String {
        let width = self
            .per_class
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = String::new();
        let _ = writeln!(out, "accuracy {:.4} (n = {})", self.accuracy, self.n);
        let _ = writeln!(
            out,
            "{:width$}  {:>9}  {:>9}  {:>9}  {:>7}",
            "class", "precision", "recall", "f1", "support"
        );
        for (c, support) in self.per_class.iter().zip(self.class_support()) {
            let flag = if c.undefined { "*" } else { "" };
            let _ = writeln!(
                out,
                "{:width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>7}{flag}",
                c.name, c.precision, c.recall, c.f1, support
            );
        }
        let _ = writeln!(out, "confusion (rows gold, columns predicted)");
        for (row, c) in self.confusion.iter().zip(&self.per_class) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>6}")).collect();
            let _ = writeln!(out, "{:width$}  {}", c.name, cells.join(""));
        }
        if self.per_class.iter().any(|c| c.undefined) {
            let _ = writeln!(out, "* zero denominator, reported as 0");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap(), 0.75);
        assert!(accuracy(&[], &[]).is_err());
        assert!(accuracy(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn confusion_example() {
        let m = confusion_matrix(&[0, 1, 1, 0], &[0, 1, 0, 0], 2).unwrap();
        assert_eq!(m, vec![vec![2, 1], vec![0, 1]]);
        assert!(confusion_matrix(&[2], &[0], 2).is_err());
    }

    #[test]
    fn per_class_and_zero_division() {
        let m = compute_metrics(&[0, 1, 1, 0], &[0, 1, 0, 0], LabelScheme::binary_a()).unwrap();
        assert!((m.per_class[0].precision - 1.0).abs() < 1e-12);
        assert!((m.per_class[0].recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.per_class[1].precision - 0.5).abs() < 1e-12);
        assert!((m.per_class[1].f1 - 2.0 / 3.0).abs() < 1e-12);

        // class 1 never predicted and never present
        let m = compute_metrics(&[0, 0], &[0, 0], LabelScheme::binary_a()).unwrap();
        assert_eq!(m.per_class[1].precision, 0.0);
        assert_eq!(m.per_class[1].recall, 0.0);
        assert!(m.per_class[1].undefined);
        assert!(m.render_report().contains('*'));
    }

    #[test]
    fn json_schema() {
        let m = compute_metrics(&[0, 1], &[0, 1], LabelScheme::binary_a()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["accuracy", "confusion", "n", "per_class"]);
        let pc = v["per_class"][1].as_object().unwrap();
        let mut keys: Vec<_> = pc.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["f1", "name", "precision", "recall"]);
        assert_eq!(v["per_class"][1]["name"], "machine");
    }

    proptest! {
        #[test]
        fn confusion_marginals(pairs in prop::collection::vec((0usize..6, 0usize..6), 1..200)) {
            let (preds, golds): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            let m = compute_metrics(&preds, &golds, LabelScheme::multiway_b()).unwrap();
            let total: usize = m.confusion.iter().flatten().sum();
            prop_assert_eq!(total, golds.len());
            for (c, support) in m.class_support().into_iter().enumerate() {
                prop_assert_eq!(support, golds.iter().filter(|&&g| g == c).count());
            }
            let diag: usize = (0..6).map(|c| m.confusion[c][c]).sum();
            prop_assert!((m.accuracy - diag as f64 / golds.len() as f64).abs() < 1e-15);
            for c in &m.per_class {
                prop_assert!((0.0..=1.0).contains(&c.f1));
            }
        }
    }
}
