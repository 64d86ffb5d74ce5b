use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{char_ngrams, check_range, tokenize_words, word_ngrams};
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// How raw text becomes a list of terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analyzer {
    Word,
    WordNgram { nmin: usize, nmax: usize },
    CharNgram { nmin: usize, nmax: usize },
}

impl Analyzer {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Analyzer::Word => Ok(()),
            Analyzer::WordNgram { nmin, nmax } | Analyzer::CharNgram { nmin, nmax } => {
                check_range(nmin, nmax)
            }
        }
    }

    pub fn analyze(&self, text: &str) -> Result<Vec<String>> {
        match *self {
            Analyzer::Word => Ok(tokenize_words(text)),
            Analyzer::WordNgram { nmin, nmax } => word_ngrams(&tokenize_words(text), nmin, nmax),
            Analyzer::CharNgram { nmin, nmax } => char_ngrams(text, nmin, nmax),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs_fitted: usize,
    analyzer: Analyzer,
}

/// Term → column mapping with document frequencies. Columns follow
/// lexicographic term order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs_fitted: usize,
    analyzer: Analyzer,
    index: HashMap<String, usize>,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        let index = r
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            terms: r.terms,
            doc_freq: r.doc_freq,
            n_docs_fitted: r.n_docs_fitted,
            analyzer: r.analyzer,
            index,
        }
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        Self {
            terms: v.terms,
            doc_freq: v.doc_freq,
            n_docs_fitted: v.n_docs_fitted,
            analyzer: v.analyzer,
        }
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn n_docs_fitted(&self) -> usize {
        self.n_docs_fitted
    }

    pub fn analyzer(&self) -> Analyzer {
        self.analyzer
    }

    /// Records which analyzer produced the fitted terms.
    pub fn with_analyzer(mut self, analyzer: Analyzer) -> Self {
        self.analyzer = analyzer;
        self
    }
}

/// Keeps terms appearing in at least `min_df` documents (`0` behaves like `1`).
pub fn fit_vocabulary<S: AsRef<str>>(corpus: &[Vec<S>], min_df: usize) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::Empty("cannot fit a vocabulary on an empty corpus"));
    }
    let mut df: HashMap<&str, usize> = HashMap::new();
    for doc in corpus {
        let unique: HashSet<&str> = doc.iter().map(AsRef::as_ref).collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(&str, usize)> = df.into_iter().filter(|&(_, n)| n >= min_df).collect();
    kept.sort_unstable_by(|a, b| a.0.cmp(b.0));
    let (terms, doc_freq): (Vec<String>, Vec<usize>) =
        kept.into_iter().map(|(t, n)| (t.to_string(), n)).unzip();
    Ok(VocabularyRepr {
        terms,
        doc_freq,
        n_docs_fitted: corpus.len(),
        analyzer: Analyzer::Word,
    }
    .into())
}

/// Raw term counts over the vocabulary; unknown terms are ignored.
pub fn count_transform<S: AsRef<str>>(terms: &[S], vocab: &Vocabulary) -> SparseVector {
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for term in terms {
        if let Some(i) = vocab.index_of(term.as_ref()) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(usize, f64)> = counts.into_iter().collect();
    entries.sort_unstable_by_key(|&(i, _)| i);
    SparseVector::from_sorted_unchecked(vocab.len(), entries)
}

/// Smoothed inverse document frequencies, `ln((1 + N) / (1 + df)) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdfWeights {
    idf: Vec<f64>,
    n_docs: usize,
}

impl IdfWeights {
    pub fn weights(&self) -> &[f64] {
        &self.idf
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn len(&self) -> usize {
        self.idf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idf.is_empty()
    }

    /// Uses the document frequencies recorded in the vocabulary itself.
    pub fn from_vocabulary(vocab: &Vocabulary) -> Self {
        let n = vocab.n_docs_fitted();
        Self {
            idf: vocab
                .doc_freq()
                .iter()
                .map(|&df| smoothed_idf(n, df))
                .collect(),
            n_docs: n,
        }
    }
}

fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Computes idf from the count vectors of the fitting corpus: `N` is the
/// number of vectors and `df` the number of vectors with a nonzero entry.
pub fn fit_idf(counts: &[SparseVector], vocab: &Vocabulary) -> Result<IdfWeights> {
    let mut df = vec![0usize; vocab.len()];
    for v in counts {
        v.check_dim(vocab.len())?;
        for (i, _) in v.iter() {
            df[i] += 1;
        }
    }
    Ok(IdfWeights {
        idf: df.iter().map(|&d| smoothed_idf(counts.len(), d)).collect(),
        n_docs: counts.len(),
    })
}

/// `count × idf`, then L2-normalized. A zero vector stays zero.
pub fn tfidf_transform(counts: &SparseVector, idf: &IdfWeights) -> Result<SparseVector> {
    counts.check_dim(idf.len())?;
    let mut out = SparseVector::from_sorted_unchecked(
        counts.dim(),
        counts.iter().map(|(i, c)| (i, c * idf.idf[i])).collect(),
    );
    let norm = out.l2_norm();
    if norm > 0.0 {
        out.scale(1.0 / norm);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Vocabulary {
        fit_vocabulary(&[vec!["a", "b"], vec!["a"]], 1).unwrap()
    }

    #[test]
    fn fit_hand_counts() {
        let v = toy();
        assert_eq!(v.terms(), &["a", "b"]);
        assert_eq!(v.doc_freq(), &[2, 1]);
        assert_eq!(v.n_docs_fitted(), 2);

        let v = fit_vocabulary(&[vec!["a", "b"], vec!["a"]], 2).unwrap();
        assert_eq!(v.terms(), &["a"]);

        let empty: Vec<Vec<String>> = vec![vec![], vec![]];
        assert!(fit_vocabulary(&empty, 1).unwrap().is_empty());
        let none: Vec<Vec<String>> = vec![];
        assert!(fit_vocabulary(&none, 1).is_err());
    }

    #[test]
    fn lexicographic_indices() {
        let v = fit_vocabulary(&[vec!["zeta", "alpha", "mid"]], 1).unwrap();
        assert_eq!(v.index_of("alpha"), Some(0));
        assert_eq!(v.index_of("mid"), Some(1));
        assert_eq!(v.index_of("zeta"), Some(2));
    }

    #[test]
    fn counts() {
        let v = toy();
        assert_eq!(count_transform(&["a", "a", "z"], &v).entries(), &[(0, 2.0)]);
        let empty = count_transform::<&str>(&[], &v);
        assert!(empty.is_empty());
        assert_eq!(empty.dim(), 2);
        assert_eq!(count_transform(&["b"], &v).entries(), &[(1, 1.0)]);
    }

    #[test]
    fn idf_closed_form() {
        let v = toy();
        let counts: Vec<_> = [vec!["a", "b"], vec!["a"]]
            .iter()
            .map(|d| count_transform(d, &v))
            .collect();
        let idf = fit_idf(&counts, &v).unwrap();
        assert_eq!(idf.weights()[0], 1.0);
        assert!((idf.weights()[1] - 1.405_465_108_108_164_4).abs() < 1e-12);
        assert_eq!(idf, IdfWeights::from_vocabulary(&v));

        let single = fit_vocabulary(&[vec!["x"]], 1).unwrap();
        let c = vec![count_transform(&["x"], &single)];
        assert_eq!(fit_idf(&c, &single).unwrap().weights(), &[1.0]);
    }

    #[test]
    fn tfidf_normalizes() {
        let unit = IdfWeights {
            idf: vec![1.0, 1.0],
            n_docs: 2,
        };
        let c = SparseVector::from_pairs(2, vec![(0, 2.0)]).unwrap();
        assert_eq!(tfidf_transform(&c, &unit).unwrap().entries(), &[(0, 1.0)]);
        assert!(tfidf_transform(&SparseVector::zeros(2), &unit)
            .unwrap()
            .is_empty());

        let c = SparseVector::from_pairs(2, vec![(0, 1.0), (1, 1.0)]).unwrap();
        let t = tfidf_transform(&c, &unit).unwrap();
        for (_, v) in t.iter() {
            assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
        assert!(tfidf_transform(&SparseVector::zeros(3), &unit).is_err());
    }

    #[test]
    fn serde_rebuilds_index() {
        let v = toy().with_analyzer(Analyzer::CharNgram { nmin: 3, nmax: 5 });
        let bytes = bincode::serialize(&v).unwrap();
        let back: Vocabulary = bincode::deserialize(&bytes).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.index_of("b"), Some(1));
    }
}
