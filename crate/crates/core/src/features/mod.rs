//! Text featurization: tokenizers, n-gram analyzers, count and TF-IDF
//! vectorizers, averaged pretrained embeddings, and stacked feature views.

mod embedding;
mod stack;
mod vocab;

pub use embedding::{embed_average, load_embeddings, parse_embeddings, EmbeddingTable};
pub use stack::{FeatureSpec, FeatureStack, FittedFeature};
pub use vocab::{
    count_transform, fit_idf, fit_vocabulary, tfidf_transform, Analyzer, IdfWeights, Vocabulary,
};

use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Lowercased maximal runs of alphanumeric characters.
pub fn tokenize_words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn check_range(nmin: usize, nmax: usize) -> Result<()> {
    if nmin < 1 || nmin > nmax {
        return Err(Error::InvalidRange { nmin, nmax });
    }
    Ok(())
}

/// Contiguous token n-grams joined by a single space, ordered by start
/// position and then by length.
pub fn word_ngrams<S: AsRef<str>>(tokens: &[S], nmin: usize, nmax: usize) -> Result<Vec<String>> {
    check_range(nmin, nmax)?;
    let mut out = Vec::new();
    for start in 0..tokens.len() {
        for n in nmin..=nmax {
            let end = start + n;
            if end > tokens.len() {
                break;
            }
            let gram = tokens[start..end]
                .iter()
                .map(AsRef::as_ref)
                .collect::<Vec<_>>()
                .join(" ");
            out.push(gram);
        }
    }
    Ok(out)
}

/// Code-point n-grams of the lowercased text, spaces included, ordered by
/// length and then by start position.
pub fn char_ngrams(text: &str, nmin: usize, nmax: usize) -> Result<Vec<String>> {
    check_range(nmin, nmax)?;
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    let mut out = Vec::new();
    for n in nmin..=nmax {
        out.extend(chars.windows(n).map(|w| w.iter().collect::<String>()));
    }
    Ok(out)
}

/// Appends a dense block after a sparse vector. Dense zeros are omitted.
pub fn concat_features(sparse: &SparseVector, dense: &[f64]) -> SparseVector {
    sparse.concat(&SparseVector::from_dense(dense))
}
