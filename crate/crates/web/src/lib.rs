//! Browser bindings for the detector demo. Every export returns JSON text so
//! the page needs no extra glue beyond `JSON.parse`.

use mgtdetect_core::corpus::{LabelScheme, SchemeKind};
use mgtdetect_core::eval::evaluate;
use mgtdetect_core::features::{char_ngrams, tokenize_words, FeatureSpec, FeatureStack};
use mgtdetect_core::pipeline::{pipeline_fit, preset, FittedPipeline};
use mgtdetect_core::synth::{generate, train_test_split, SynthConfig};
use mgtdetect_core::{preprocess, PreprocessVersion};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn js_err(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Output of every cleaning regime for one input.
pub fn preprocess_report(text: &str) -> Value {
    let versions = [
        PreprocessVersion::None,
        PreprocessVersion::V2,
        PreprocessVersion::V1,
    ];
    let rows: Vec<Value> = versions
        .iter()
        .map(|&v| {
            let out = preprocess(text, v);
            json!({ "version": v.to_string(), "text": out, "chars": out.chars().count() })
        })
        .collect();
    json!(rows)
}

#[wasm_bindgen(js_name = preprocessText)]
pub fn preprocess_text(text: &str) -> String {
    preprocess_report(text).to_string()
}

/// Word tokens, character n-grams and the TF-IDF weights a single document
/// gets when a character-n-gram view is fitted on `corpus` lines plus it.
pub fn feature_report(text: &str, corpus: &str, nmin: usize, nmax: usize) -> Result<Value, String> {
    let grams = char_ngrams(text, nmin, nmax).map_err(|e| e.to_string())?;
    let mut docs: Vec<&str> = corpus.lines().filter(|l| !l.trim().is_empty()).collect();
    docs.push(text);
    let stack = FeatureStack::fit(&[FeatureSpec::TfidfChar { nmin, nmax }], &docs, 1)
        .map_err(|e| e.to_string())?;
    let v = stack.transform(text);
    let mut weights: Vec<(String, f64)> = match &stack.blocks()[0] {
        mgtdetect_core::features::FittedFeature::Tfidf { vocab, .. } => v
            .iter()
            .map(|(i, w)| (vocab.term(i).unwrap_or_default().to_string(), w))
            .collect(),
        _ => Vec::new(),
    };
    weights.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    weights.truncate(25);
    Ok(json!({
        "tokens": tokenize_words(text),
        "n_grams": grams.len(),
        "vocabulary": stack.dim(),
        "top": weights.iter().map(|(t, w)| json!({ "term": t, "weight": w })).collect::<Vec<_>>(),
    }))
}

#[wasm_bindgen(js_name = inspectFeatures)]
pub fn inspect_features(
    text: &str,
    corpus: &str,
    nmin: usize,
    nmax: usize,
) -> Result<String, JsValue> {
    feature_report(text, corpus, nmin, nmax)
        .map(|v| v.to_string())
        .map_err(js_err)
}

/// A detector fitted in the page on a generated corpus.
#[wasm_bindgen]
pub struct Detector {
    pipeline: FittedPipeline,
    metrics: Value,
    samples: Vec<(String, usize)>,
}

impl Detector {
    pub fn fit(
        preset_name: &str,
        n_docs: usize,
        separation: f64,
        seed: u64,
    ) -> Result<Self, String> {
        let cfg = preset(preset_name).map_err(|e| e.to_string())?;
        let scheme = LabelScheme::from(cfg.scheme);
        let synth = SynthConfig {
            n_docs,
            separation,
            seed,
            ..SynthConfig::default()
        };
        let data = generate(&synth, scheme).map_err(|e| e.to_string())?;
        let (train, test) = train_test_split(&data, 0.25).map_err(|e| e.to_string())?;
        let pipeline = pipeline_fit(&cfg, &train).map_err(|e| e.to_string())?;
        let m = evaluate(&pipeline, &test).map_err(|e| e.to_string())?;
        let metrics = serde_json::from_str(&m.to_json()).map_err(|e| e.to_string())?;
        let samples = test
            .documents
            .iter()
            .take(6)
            .map(|d| (d.text.clone(), d.label.unwrap_or_default()))
            .collect();
        Ok(Self {
            pipeline,
            metrics,
            samples,
        })
    }

    pub fn classify_value(&self, text: &str) -> Value {
        let scheme = self.pipeline.scheme();
        let label = self.pipeline.predict_one(text);
        let proba = self.pipeline.predict_proba_one(text).ok();
        json!({
            "label": label,
            "name": scheme.decode(label).unwrap_or("?"),
            "classes": scheme.class_names(),
            "proba": proba,
        })
    }

    pub fn summary_value(&self) -> Value {
        let scheme = self.pipeline.scheme();
        json!({
            "scheme": match scheme.kind() {
                SchemeKind::BinaryA => "binary",
                SchemeKind::MultiwayB => "six-way",
            },
            "metrics": self.metrics,
            "model_bytes": self.pipeline.to_bytes().len(),
            "samples": self.samples.iter().map(|(t, l)| json!({
                "text": t,
                "gold": scheme.decode(*l).unwrap_or("?"),
            })).collect::<Vec<_>>(),
        })
    }
}

#[wasm_bindgen]
impl Detector {
    /// Generates a corpus, holds out a quarter, fits the preset and scores it.
    #[wasm_bindgen(constructor)]
    pub fn new(
        preset_name: &str,
        n_docs: usize,
        separation: f64,
        seed: u64,
    ) -> Result<Detector, JsValue> {
        Self::fit(preset_name, n_docs, separation, seed).map_err(js_err)
    }

    pub fn classify(&self, text: &str) -> String {
        self.classify_value(text).to_string()
    }

    pub fn summary(&self) -> String {
        self.summary_value().to_string()
    }
}

#[wasm_bindgen]
pub fn presets() -> String {
    json!(mgtdetect_core::pipeline::PRESETS).to_string()
}
