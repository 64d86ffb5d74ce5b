//! Statistical detection of machine-generated text.
//!
//! Corpora are JSONL files labelled under one of two schemes (binary
//! human/machine, or six-way by source model). A [`pipeline::PipelineConfig`]
//! ties together a cleaning regime, one or more feature views (counts,
//! TF-IDF over words, word n-grams or character n-grams, averaged word
//! embeddings) and a classifier: multinomial naive Bayes, SGD-trained linear
//! models, a one-hidden-layer perceptron, histogram gradient boosting, or a
//! voting ensemble of those.
//!
//! ```
//! use mgtdetect_core::corpus::LabelScheme;
//! use mgtdetect_core::pipeline::{pipeline_fit, preset};
//! use mgtdetect_core::synth::{generate, SynthConfig};
//!
//! let cfg = SynthConfig { n_docs: 200, ..SynthConfig::default() };
//! let data = generate(&cfg, LabelScheme::binary_a()).unwrap();
//! let fitted = pipeline_fit(&preset("lr-ngram").unwrap(), &data).unwrap();
//! let labels = fitted.predict(&["some text to classify"]);
//! assert!(labels[0] < 2);
//! ```

pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod features;
pub mod models;
mod par;
pub mod pipeline;
pub mod preprocess;
pub mod sparse;
pub mod synth;

pub use corpus::{Dataset, Document, LabelScheme, SchemeKind};
pub use error::{Error, Result};
pub use eval::{evaluate, Metrics};
pub use pipeline::{
    load_pipeline, pipeline_fit, preset, save_pipeline, FittedPipeline, PipelineConfig,
};
pub use preprocess::{preprocess, PreprocessVersion};
pub use sparse::SparseVector;
