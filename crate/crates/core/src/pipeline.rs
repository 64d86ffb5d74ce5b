//! Trainable, serializable detectors: preprocessing, feature views and a
//! model (or voting ensemble) composed behind one `fit`/`predict` surface.
//!
//! # Model file layout
//!
//! ```text
//! "MGTD" | version: u32 LE | config_len: u64 LE | config (JSON)
//!        | params_len: u64 LE | params (bincode)
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, LabelScheme, SchemeKind};
use crate::ensemble::{VotingEnsemble, VotingMode};
use crate::error::{Error, Result};
use crate::features::{FeatureSpec, FeatureStack};
use crate::models::{
    gbdt_fit, mlp_fit, nb_fit, sgd_fit_linear, Classifier, Loss, Model, TrainConfig,
};
use crate::par;
use crate::preprocess::{preprocess, PreprocessVersion};
use crate::sparse::SparseVector;

pub const MAGIC: &[u8; 4] = b"MGTD";
pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

/// Optional per-model overrides of [`TrainConfig`]; unset fields fall back
/// to the model family's defaults and the pipeline seed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_leaf: Option<usize>,
}

impl TrainOverrides {
    pub fn resolve(&self, base: TrainConfig, pipeline_seed: u64) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs.unwrap_or(base.epochs),
            learning_rate: self.learning_rate.unwrap_or(base.learning_rate),
            l2_alpha: self.l2_alpha.unwrap_or(base.l2_alpha),
            seed: self.seed.unwrap_or(pipeline_seed),
            hidden_size: self.hidden_size.unwrap_or(base.hidden_size),
            batch_size: self.batch_size.unwrap_or(base.batch_size),
            n_rounds: self.n_rounds.unwrap_or(base.n_rounds),
            max_depth: self.max_depth.unwrap_or(base.max_depth),
            n_bins: self.n_bins.unwrap_or(base.n_bins),
            min_leaf: self.min_leaf.unwrap_or(base.min_leaf),
        }
    }
}

fn default_alpha() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    Nb {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Linear {
        loss: Loss,
        #[serde(default)]
        cfg: TrainOverrides,
    },
    Mlp {
        #[serde(default)]
        cfg: TrainOverrides,
    },
    Gbdt {
        #[serde(default)]
        cfg: TrainOverrides,
    },
    Ensemble {
        members: Vec<MemberSpec>,
        #[serde(default)]
        mode: VotingMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
}

/// An ensemble member; without its own feature list it uses the
/// pipeline-level features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<FeatureSpec>>,
    pub model: ModelSpec,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_min_df() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub scheme: SchemeKind,
    #[serde(default)]
    pub preprocess: PreprocessVersion,
    pub features: Vec<FeatureSpec>,
    pub model: ModelSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_min_df")]
    pub min_df: usize,
}

impl PipelineConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    /// Points every embedding view at `path`.
    pub fn set_embeddings(&mut self, path: &Path) {
        fn patch(specs: &mut [FeatureSpec], path: &Path) {
            for spec in specs {
                if let FeatureSpec::EmbedAvg { path: p } = spec {
                    *p = Some(path.to_path_buf());
                }
            }
        }
        patch(&mut self.features, path);
        if let ModelSpec::Ensemble { members, .. } = &mut self.model {
            for m in members {
                if let Some(f) = &mut m.features {
                    patch(f, path);
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.is_empty() {
            return Err(Error::Config(
                "at least one feature spec is required".into(),
            ));
        }
        self.features.iter().try_for_each(FeatureSpec::validate)?;
        if let ModelSpec::Ensemble { members, .. } = &self.model {
            if members.is_empty() {
                return Err(Error::Config(
                    "an ensemble needs at least one member".into(),
                ));
            }
            for m in members {
                if matches!(m.model, ModelSpec::Ensemble { .. }) {
                    return Err(Error::Config("nested ensembles are not supported".into()));
                }
                if let Some(f) = &m.features {
                    if f.is_empty() {
                        return Err(Error::Config(
                            "ensemble member feature list must not be empty".into(),
                        ));
                    }
                    f.iter().try_for_each(FeatureSpec::validate)?;
                }
            }
        }
        Ok(())
    }
}

pub const PRESETS: [&str; 3] = ["lr-ngram", "ensemble-a-mono", "mlp-b"];

/// Named configurations.
///
/// * `lr-ngram`: logistic regression over word 1-3-gram TF-IDF.
/// * `ensemble-a-mono`: hard vote of naive Bayes, logistic SGD and GBDT over
///   character 3-5-gram TF-IDF plus averaged embeddings. Naive Bayes sees the
///   TF-IDF view only, since it needs nonnegative inputs. The embedding view
///   is dropped unless an embedding file is configured.
/// * `mlp-b`: perceptron over word TF-IDF for the six-way scheme.
pub fn preset(name: &str) -> Result<PipelineConfig> {
    let char_tfidf = FeatureSpec::TfidfChar { nmin: 3, nmax: 5 };
    let cfg = match name {
        "lr-ngram" => PipelineConfig {
            scheme: SchemeKind::BinaryA,
            preprocess: PreprocessVersion::None,
            features: vec![FeatureSpec::TfidfWordngram { nmin: 1, nmax: 3 }],
            model: ModelSpec::Linear {
                loss: Loss::Logistic,
                cfg: TrainOverrides::default(),
            },
            seed: DEFAULT_SEED,
            min_df: 1,
        },
        "ensemble-a-mono" => PipelineConfig {
            scheme: SchemeKind::BinaryA,
            preprocess: PreprocessVersion::None,
            features: vec![char_tfidf.clone(), FeatureSpec::EmbedAvg { path: None }],
            model: ModelSpec::Ensemble {
                members: vec![
                    MemberSpec {
                        features: Some(vec![char_tfidf]),
                        model: ModelSpec::Nb { alpha: 1.0 },
                    },
                    MemberSpec {
                        features: None,
                        model: ModelSpec::Linear {
                            loss: Loss::Logistic,
                            cfg: TrainOverrides::default(),
                        },
                    },
                    MemberSpec {
                        features: None,
                        model: ModelSpec::Gbdt {
                            cfg: TrainOverrides::default(),
                        },
                    },
                ],
                mode: VotingMode::Hard,
                weights: None,
            },
            seed: DEFAULT_SEED,
            min_df: 1,
        },
        "mlp-b" => PipelineConfig {
            scheme: SchemeKind::MultiwayB,
            preprocess: PreprocessVersion::None,
            features: vec![FeatureSpec::TfidfWord],
            model: ModelSpec::Mlp {
                cfg: TrainOverrides::default(),
            },
            seed: DEFAULT_SEED,
            min_df: 1,
        },
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_string(),
                available: PRESETS.join(", "),
            })
        }
    };
    Ok(cfg)
}

/// A model bound to one of the pipeline's feature stacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundModel {
    pub stack: usize,
    pub model: Model,
}

impl Classifier for BoundModel {
    /// One transformed vector per feature stack.
    type Input = [SparseVector];

    fn n_classes(&self) -> usize {
        self.model.n_classes()
    }

    fn supports_proba(&self) -> bool {
        self.model.supports_proba()
    }

    fn decision(&self, views: &[SparseVector]) -> Result<Vec<f64>> {
        self.model.decision(&views[self.stack])
    }

    fn predict_proba(&self, views: &[SparseVector]) -> Result<Vec<f64>> {
        self.model.predict_proba(&views[self.stack])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FittedModel {
    Single(BoundModel),
    Ensemble(VotingEnsemble<BoundModel>),
}

impl FittedModel {
    fn as_classifier(&self) -> &dyn Classifier<Input = [SparseVector]> {
        match self {
            FittedModel::Single(m) => m,
            FittedModel::Ensemble(e) => e,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Params {
    stacks: Vec<FeatureStack>,
    model: FittedModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedPipeline {
    config: PipelineConfig,
    stacks: Vec<FeatureStack>,
    model: FittedModel,
}

impl FittedPipeline {
    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn scheme(&self) -> LabelScheme {
        self.config.scheme.into()
    }

    pub fn stacks(&self) -> &[FeatureStack] {
        &self.stacks
    }

    pub fn model(&self) -> &FittedModel {
        &self.model
    }

    /// Preprocessed text → one feature vector per stack.
    pub fn featurize(&self, text: &str) -> Vec<SparseVector> {
        let clean = preprocess(text, self.config.preprocess);
        self.stacks.iter().map(|s| s.transform(&clean)).collect()
    }

    pub fn predict_one(&self, text: &str) -> usize {
        self.model
            .as_classifier()
            .predict(&self.featurize(text))
            .expect("feature dimensions fixed at fit time")
    }

    pub fn predict<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<usize> {
        par::map(texts, |t| self.predict_one(t.as_ref()))
    }

    pub fn supports_proba(&self) -> bool {
        self.model.as_classifier().supports_proba()
    }

    pub fn predict_proba_one(&self, text: &str) -> Result<Vec<f64>> {
        self.model
            .as_classifier()
            .predict_proba(&self.featurize(text))
    }

    /// Class probabilities per text; errors for hard-vote ensembles and
    /// hinge-loss models.
    pub fn predict_proba<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Result<Vec<Vec<f64>>> {
        if !self.supports_proba() {
            return Err(Error::NoProbability("this pipeline"));
        }
        par::map(texts, |t| self.predict_proba_one(t.as_ref()))
            .into_iter()
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let config = serde_json::to_vec(&self.config).expect("config is always serializable");
        let params = bincode::serialize(&ParamsRef {
            stacks: &self.stacks,
            model: &self.model,
        })
        .expect("parameters are always serializable");
        let mut out = Vec::with_capacity(24 + config.len() + params.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(config.len() as u64).to_le_bytes());
        out.extend_from_slice(&config);
        out.extend_from_slice(&(params.len() as u64).to_le_bytes());
        out.extend_from_slice(&params);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut reader = ByteReader { bytes, pos: 0 };
        if reader.take(4)? != MAGIC {
            return Err(Error::IncompatibleModel("bad magic bytes".into()));
        }
        let version = u32::from_le_bytes(reader.take(4)?.try_into().expect("4 bytes"));
        if version != FORMAT_VERSION {
            return Err(Error::IncompatibleModel(format!(
                "format version {version}, this build reads version {FORMAT_VERSION}"
            )));
        }
        let config_len = reader.take_len()?;
        let config: PipelineConfig = serde_json::from_slice(reader.take(config_len)?)
            .map_err(|e| Error::IncompatibleModel(format!("config: {e}")))?;
        let params_len = reader.take_len()?;
        let params: Params = bincode::deserialize(reader.take(params_len)?)
            .map_err(|e| Error::IncompatibleModel(format!("parameters: {e}")))?;
        if reader.pos != bytes.len() {
            return Err(Error::IncompatibleModel(
                "trailing bytes after parameters".into(),
            ));
        }
        Ok(Self {
            config,
            stacks: params.stacks,
            model: params.model,
        })
    }
}

#[derive(Serialize)]
struct ParamsRef<'a> {
    stacks: &'a [FeatureStack],
    model: &'a FittedModel,
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::IncompatibleModel("file is truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn take_len(&mut self) -> Result<usize> {
        let raw = u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"));
        usize::try_from(raw).map_err(|_| Error::IncompatibleModel("section too large".into()))
    }
}

pub fn save_pipeline(fp: &FittedPipeline, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, fp.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn load_pipeline(path: impl AsRef<Path>) -> Result<FittedPipeline> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    FittedPipeline::from_bytes(&bytes)
}

pub fn pipeline_predict<S: AsRef<str> + Sync>(fp: &FittedPipeline, texts: &[S]) -> Vec<usize> {
    fp.predict(texts)
}

/// Fits feature views on `train` only, then the configured model on the
/// transformed training set.
pub fn pipeline_fit(cfg: &PipelineConfig, train: &Dataset) -> Result<FittedPipeline> {
    cfg.validate()?;
    if train.scheme.kind() != cfg.scheme {
        return Err(Error::Config(format!(
            "dataset uses scheme {} but the pipeline expects {}",
            train.scheme.kind(),
            cfg.scheme
        )));
    }
    if train.is_empty() {
        return Err(Error::Empty("training set has no documents"));
    }
    let labels = train.labels()?;
    let n_classes = LabelScheme::from(cfg.scheme).n_classes();
    let texts: Vec<String> = par::map(&train.documents, |d| preprocess(&d.text, cfg.preprocess));

    // distinct feature lists, each fitted once
    let mut stack_specs: Vec<&[FeatureSpec]> = Vec::new();
    let members: Vec<(usize, &ModelSpec)> = match &cfg.model {
        ModelSpec::Ensemble { members, .. } => members
            .iter()
            .map(|m| {
                let specs = m.features.as_deref().unwrap_or(&cfg.features);
                (stack_of(specs, &mut stack_specs), &m.model)
            })
            .collect(),
        single => vec![(stack_of(&cfg.features, &mut stack_specs), single)],
    };

    let mut stacks = Vec::with_capacity(stack_specs.len());
    let mut matrices = Vec::with_capacity(stack_specs.len());
    for specs in &stack_specs {
        let stack = FeatureStack::fit(specs, &texts, cfg.min_df)?;
        matrices.push(stack.transform_batch(&texts));
        stacks.push(stack);
    }

    let fitted: Vec<BoundModel> = par::map(&members, |&(stack, spec)| {
        fit_model(spec, &matrices[stack], &labels, n_classes, cfg.seed)
            .map(|model| BoundModel { stack, model })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let model = match &cfg.model {
        ModelSpec::Ensemble { mode, weights, .. } => {
            FittedModel::Ensemble(VotingEnsemble::new(fitted, *mode, weights.clone())?)
        }
        _ => FittedModel::Single(fitted.into_iter().next().expect("one member")),
    };
    Ok(FittedPipeline {
        config: cfg.clone(),
        stacks,
        model,
    })
}

fn stack_of<'a>(specs: &'a [FeatureSpec], stack_specs: &mut Vec<&'a [FeatureSpec]>) -> usize {
    match stack_specs.iter().position(|s| *s == specs) {
        Some(i) => i,
        None => {
            stack_specs.push(specs);
            stack_specs.len() - 1
        }
    }
}

fn fit_model(
    spec: &ModelSpec,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    seed: u64,
) -> Result<Model> {
    Ok(match spec {
        ModelSpec::Nb { alpha } => Model::NaiveBayes(nb_fit(x, y, n_classes, *alpha)?),
        ModelSpec::Linear { loss, cfg } => {
            let cfg = cfg.resolve(TrainConfig::linear_default(), seed);
            Model::Linear(sgd_fit_linear(x, y, n_classes, *loss, &cfg)?)
        }
        ModelSpec::Mlp { cfg } => {
            let cfg = cfg.resolve(TrainConfig::mlp_default(), seed);
            Model::Mlp(mlp_fit(x, y, n_classes, &cfg)?)
        }
        ModelSpec::Gbdt { cfg } => {
            let cfg = cfg.resolve(TrainConfig::gbdt_default(), seed);
            Model::Gbdt(gbdt_fit(x, y, n_classes, &cfg)?)
        }
        ModelSpec::Ensemble { .. } => {
            return Err(Error::Config("nested ensembles are not supported".into()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    fn tiny(scheme: LabelScheme) -> Dataset {
        let texts = [
            ("the cat sat on the mat", 0),
            ("a cat and a hat", 0),
            ("quantum flux capacitor output", 1),
            ("flux output nominal quantum", 1),
        ];
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, (t, l))| Document::new(i.to_string(), *t, Some(*l)))
            .collect();
        Dataset::new(docs, scheme, "train").unwrap()
    }

    #[test]
    fn presets_shape() {
        let e = preset("ensemble-a-mono").unwrap();
        let ModelSpec::Ensemble { members, mode, .. } = &e.model else {
            panic!("ensemble preset must be an ensemble")
        };
        assert_eq!(*mode, VotingMode::Hard);
        assert!(matches!(members[0].model, ModelSpec::Nb { .. }));
        assert!(matches!(
            members[1].model,
            ModelSpec::Linear {
                loss: Loss::Logistic,
                ..
            }
        ));
        assert!(matches!(members[2].model, ModelSpec::Gbdt { .. }));

        let lr = preset("lr-ngram").unwrap();
        assert!(matches!(
            lr.model,
            ModelSpec::Linear {
                loss: Loss::Logistic,
                ..
            }
        ));
        assert_eq!(preset("mlp-b").unwrap().scheme, SchemeKind::MultiwayB);

        let err = preset("nope").unwrap_err().to_string();
        assert!(err.contains("lr-ngram") && err.contains("mlp-b"), "{err}");
    }

    #[test]
    fn config_json_round_trip() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            assert_eq!(
                PipelineConfig::from_json(&cfg.to_json_pretty()).unwrap(),
                cfg
            );
        }
        let minimal =
            r#"{"scheme":"binary_a","features":[{"type":"count"}],"model":{"type":"nb"}}"#;
        let cfg = PipelineConfig::from_json(minimal).unwrap();
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.model, ModelSpec::Nb { alpha: 1.0 });
        assert!(PipelineConfig::from_json(r#"{"scheme":"binary_a","bogus":1}"#).is_err());
    }

    #[test]
    fn fit_predict_tiny() {
        let ds = tiny(LabelScheme::binary_a());
        let cfg = PipelineConfig {
            model: ModelSpec::Nb { alpha: 1.0 },
            features: vec![FeatureSpec::Count],
            ..preset("lr-ngram").unwrap()
        };
        let fp = pipeline_fit(&cfg, &ds).unwrap();
        assert_eq!(fp.predict(&ds.texts()), vec![0, 0, 1, 1]);
        assert!(fp.predict::<&str>(&[]).is_empty());
        assert!(fp.predict(&[""])[0] < 2);
    }

    #[test]
    fn fit_errors() {
        let ds = tiny(LabelScheme::binary_a());
        let mut cfg = preset("lr-ngram").unwrap();
        cfg.features.clear();
        assert!(pipeline_fit(&cfg, &ds).is_err());

        let cfg = preset("mlp-b").unwrap();
        assert!(pipeline_fit(&cfg, &ds).is_err());

        let empty = Dataset::new(vec![], LabelScheme::binary_a(), "train").unwrap();
        assert!(pipeline_fit(&preset("lr-ngram").unwrap(), &empty).is_err());

        let mut unlabeled = tiny(LabelScheme::binary_a());
        unlabeled.documents[2].label = None;
        assert!(matches!(
            pipeline_fit(&preset("lr-ngram").unwrap(), &unlabeled),
            Err(Error::Unlabeled(_))
        ));
    }

    #[test]
    fn bytes_round_trip_and_corruption() {
        let ds = tiny(LabelScheme::binary_a());
        let fp = pipeline_fit(&preset("lr-ngram").unwrap(), &ds).unwrap();
        let bytes = fp.to_bytes();
        assert_eq!(&bytes[..4], MAGIC);
        let back = FittedPipeline::from_bytes(&bytes).unwrap();
        assert_eq!(back, fp);

        let err = FittedPipeline::from_bytes(&bytes[..bytes.len() - 3]).unwrap_err();
        assert!(err.to_string().contains("incompatible model file"), "{err}");

        let mut wrong_version = bytes.clone();
        wrong_version[4..8].copy_from_slice(&(FORMAT_VERSION + 1).to_le_bytes());
        let err = FittedPipeline::from_bytes(&wrong_version).unwrap_err();
        assert!(err.to_string().contains("incompatible model file"), "{err}");

        let mut wrong_magic = bytes;
        wrong_magic[0] = b'X';
        assert!(matches!(
            FittedPipeline::from_bytes(&wrong_magic),
            Err(Error::IncompatibleModel(_))
        ));
    }

    #[test]
    fn hard_ensemble_has_no_proba() {
        let ds = tiny(LabelScheme::binary_a());
        let mut cfg = preset("ensemble-a-mono").unwrap();
        if let ModelSpec::Ensemble { members, .. } = &mut cfg.model {
            members[2].model = ModelSpec::Gbdt {
                cfg: TrainOverrides {
                    n_rounds: Some(3),
                    min_leaf: Some(1),
                    ..Default::default()
                },
            };
        }
        let fp = pipeline_fit(&cfg, &ds).unwrap();
        // NB uses char TF-IDF alone; the others share the same stack since
        // the embedding view is dropped
        assert_eq!(fp.stacks().len(), 2);
        assert!(fp.predict_proba(&["x"]).is_err());
    }
}
