use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{
    count_transform, embed_average, fit_idf, fit_vocabulary, load_embeddings, tfidf_transform,
    tokenize_words, Analyzer, EmbeddingTable, IdfWeights, Vocabulary,
};
use crate::error::{Error, Result};
use crate::par;
use crate::sparse::SparseVector;

/// One feature view, as written in pipeline configs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FeatureSpec {
    /// Raw word counts.
    Count,
    TfidfWord,
    TfidfWordngram {
        nmin: usize,
        nmax: usize,
    },
    TfidfChar {
        nmin: usize,
        nmax: usize,
    },
    /// Averaged pretrained word vectors. Without a path the view is skipped.
    EmbedAvg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
    },
}

impl FeatureSpec {
    fn analyzer(&self) -> Option<Analyzer> {
        match *self {
            FeatureSpec::Count | FeatureSpec::TfidfWord => Some(Analyzer::Word),
            FeatureSpec::TfidfWordngram { nmin, nmax } => Some(Analyzer::WordNgram { nmin, nmax }),
            FeatureSpec::TfidfChar { nmin, nmax } => Some(Analyzer::CharNgram { nmin, nmax }),
            FeatureSpec::EmbedAvg { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.analyzer().map_or(Ok(()), |a| a.validate())
    }
}

/// A fitted feature view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FittedFeature {
    Count { vocab: Vocabulary },
    Tfidf { vocab: Vocabulary, idf: IdfWeights },
    Embedding { table: EmbeddingTable },
}

impl FittedFeature {
    pub fn dim(&self) -> usize {
        match self {
            FittedFeature::Count { vocab } | FittedFeature::Tfidf { vocab, .. } => vocab.len(),
            FittedFeature::Embedding { table } => table.dim(),
        }
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        match self {
            FittedFeature::Count { vocab } => {
                count_transform(&analyze(vocab.analyzer(), text), vocab)
            }
            FittedFeature::Tfidf { vocab, idf } => {
                let counts = count_transform(&analyze(vocab.analyzer(), text), vocab);
                tfidf_transform(&counts, idf).expect("idf fitted on the same vocabulary")
            }
            FittedFeature::Embedding { table } => {
                SparseVector::from_dense(&embed_average(&tokenize_words(text), table))
            }
        }
    }
}

// Analyzer ranges are validated when the view is fitted.
fn analyze(analyzer: Analyzer, text: &str) -> Vec<String> {
    analyzer.analyze(text).unwrap_or_default()
}

/// Several fitted views concatenated, in configuration order, into one
/// feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStack {
    blocks: Vec<FittedFeature>,
}

impl FeatureStack {
    pub fn new(blocks: Vec<FittedFeature>) -> Self {
        Self { blocks }
    }

    /// Fits every spec on `texts`. Embedding specs without a path are
    /// skipped with a warning.
    pub fn fit<S: AsRef<str> + Sync>(
        specs: &[FeatureSpec],
        texts: &[S],
        min_df: usize,
    ) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Config(
                "at least one feature spec is required".into(),
            ));
        }
        let mut blocks = Vec::with_capacity(specs.len());
        for spec in specs {
            spec.validate()?;
            let block = match spec {
                FeatureSpec::EmbedAvg { path: None } => {
                    log::warn!("no embedding file configured; dropping the embedding feature view");
                    continue;
                }
                FeatureSpec::EmbedAvg { path: Some(path) } => FittedFeature::Embedding {
                    table: load_embeddings(path)?,
                },
                FeatureSpec::Count => FittedFeature::Count {
                    vocab: fit_view(Analyzer::Word, texts, min_df)?,
                },
                other => {
                    let analyzer = other.analyzer().expect("sparse spec has an analyzer");
                    let vocab = fit_view(analyzer, texts, min_df)?;
                    let counts = par::map(texts, |t| {
                        count_transform(&analyze(analyzer, t.as_ref()), &vocab)
                    });
                    let idf = fit_idf(&counts, &vocab)?;
                    FittedFeature::Tfidf { vocab, idf }
                }
            };
            blocks.push(block);
        }
        if blocks.is_empty() {
            return Err(Error::Config("no usable feature view after fitting".into()));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[FittedFeature] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(FittedFeature::dim).sum()
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let mut iter = self.blocks.iter();
        let first = iter.next().map(|b| b.transform(text)).unwrap_or_default();
        iter.fold(first, |acc, b| acc.concat(&b.transform(text)))
    }

    pub fn transform_batch<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<SparseVector> {
        par::map(texts, |t| self.transform(t.as_ref()))
    }
}

fn fit_view<S: AsRef<str> + Sync>(
    analyzer: Analyzer,
    texts: &[S],
    min_df: usize,
) -> Result<Vocabulary> {
    let corpus = par::map(texts, |t| analyze(analyzer, t.as_ref()));
    Ok(fit_vocabulary(&corpus, min_df)?.with_analyzer(analyzer))
}
