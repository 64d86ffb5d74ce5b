//! Seeded synthetic corpora: each class draws words from its own Zipf
//! distribution over a shared pseudo-word vocabulary, mixed with a common
//! background distribution.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Dataset, Document, LabelScheme};
use crate::error::{Error, Result};

const ONSETS: [&str; 16] = [
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ch", "st",
];
const NUCLEI: [&str; 6] = ["a", "e", "i", "o", "u", "ai"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub n_docs: usize,
    /// Defaults to the scheme's class count when `None`.
    pub n_classes: Option<usize>,
    pub vocab_size: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Fraction of tokens drawn from the class distribution; the rest come
    /// from the shared background. 0 makes classes indistinguishable.
    pub separation: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_docs: 2000,
            n_classes: None,
            vocab_size: 500,
            min_len: 30,
            max_len: 80,
            separation: 0.3,
            seed: 42,
        }
    }
}

fn pseudo_words(n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        let syllables = rng.gen_range(1..=3);
        let w: String = (0..syllables)
            .map(|_| {
                let o = ONSETS.choose(rng).expect("nonempty");
                let v = NUCLEI.choose(rng).expect("nonempty");
                format!("{o}{v}")
            })
            .collect();
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

fn zipf_over_permutation(n: usize, rng: &mut ChaCha8Rng) -> WeightedIndex<f64> {
    let mut ranks: Vec<usize> = (0..n).collect();
    ranks.shuffle(rng);
    WeightedIndex::new(ranks.iter().map(|&r| 1.0 / (r as f64 + 1.0))).expect("positive weights")
}

/// Generates a labelled, shuffled corpus with balanced classes.
pub fn generate(cfg: &SynthConfig, scheme: LabelScheme) -> Result<Dataset> {
    let n_classes = cfg.n_classes.unwrap_or(scheme.n_classes());
    if n_classes == 0 || n_classes > scheme.n_classes() {
        return Err(Error::Config(format!(
            "cannot generate {n_classes} classes under a {}-class scheme",
            scheme.n_classes()
        )));
    }
    if cfg.vocab_size == 0 || cfg.min_len == 0 || cfg.min_len > cfg.max_len {
        return Err(Error::Config(
            "synthetic corpus needs a vocabulary and 1 <= min_len <= max_len".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.separation) {
        return Err(Error::Config("separation must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vocab = pseudo_words(cfg.vocab_size, &mut rng);
    let background = zipf_over_permutation(vocab.len(), &mut rng);
    let classes: Vec<_> = (0..n_classes)
        .map(|_| zipf_over_permutation(vocab.len(), &mut rng))
        .collect();

    let mut labels: Vec<usize> = (0..cfg.n_docs).map(|i| i % n_classes).collect();
    labels.shuffle(&mut rng);
    let documents = labels
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let len = rng.gen_range(cfg.min_len..=cfg.max_len);
            let mut text = String::new();
            let mut sentence_start = true;
            for k in 0..len {
                let dist = if rng.gen_bool(cfg.separation) {
                    &classes[label]
                } else {
                    &background
                };
                let word = &vocab[dist.sample(&mut rng)];
                if k > 0 {
                    text.push(' ');
                }
                if sentence_start {
                    let mut chars = word.chars();
                    let first = chars.next().expect("nonempty word");
                    text.extend(first.to_uppercase());
                    text.push_str(chars.as_str());
                } else {
                    text.push_str(word);
                }
                sentence_start = k + 1 == len || rng.gen_bool(0.1);
                if sentence_start {
                    text.push('.');
                }
            }
            Document::new(format!("synth-{i}"), text, Some(label))
        })
        .collect();
    Dataset::new(documents, scheme, "synthetic")
}

/// Splits off the last `test_fraction` of documents as a held-out set.
pub fn train_test_split(ds: &Dataset, test_fraction: f64) -> Result<(Dataset, Dataset)> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::Config("test fraction must lie in [0, 1)".into()));
    }
    let n_test = (ds.len() as f64 * test_fraction).round() as usize;
    let cut = ds.len() - n_test;
    let train = Dataset::new(ds.documents[..cut].to_vec(), ds.scheme, "train")?;
    let test = Dataset::new(ds.documents[cut..].to_vec(), ds.scheme, "test")?;
    Ok((train, test))
}
