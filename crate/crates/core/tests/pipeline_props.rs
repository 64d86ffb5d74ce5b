use mgtdetect_core::corpus::{Dataset, Document, LabelScheme};
use mgtdetect_core::eval::{compute_metrics, evaluate};
use mgtdetect_core::features::{FeatureSpec, FittedFeature};
use mgtdetect_core::pipeline::{
    pipeline_fit, preset, FittedPipeline, ModelSpec, PipelineConfig, TrainOverrides,
};
use mgtdetect_core::synth::{generate, SynthConfig};
use mgtdetect_core::{load_pipeline, save_pipeline, PreprocessVersion};
use proptest::prelude::*;
use std::sync::OnceLock;

fn small_binary() -> Dataset {
    let cfg = SynthConfig {
        n_docs: 200,
        seed: 11,
        ..SynthConfig::default()
    };
    generate(&cfg, LabelScheme::binary_a()).unwrap()
}

fn fitted_lr() -> &'static FittedPipeline {
    static FP: OnceLock<FittedPipeline> = OnceLock::new();
    FP.get_or_init(|| pipeline_fit(&preset("lr-ngram").unwrap(), &small_binary()).unwrap())
}

#[test]
fn features_see_training_text_only() {
    let train = small_binary();
    let fp = fitted_lr();
    let probe = "qqqunseen xxxneverseen qqqunseen";
    let _ = fp.predict(&[probe]);
    for stack in fp.stacks() {
        for block in stack.blocks() {
            if let FittedFeature::Tfidf { vocab, .. } | FittedFeature::Count { vocab } = block {
                assert!(vocab.terms().iter().all(|t| !t.contains("qqqunseen")));
                assert_eq!(vocab.n_docs_fitted(), train.len());
            }
        }
    }
    assert!(fp.featurize(probe).iter().all(|v| v.is_empty()));

    // predicting between two fits leaves the second fit unchanged
    let again = pipeline_fit(fp.config(), &train).unwrap();
    assert_eq!(&again, fp);
}

#[test]
fn overfit_gbdt_reaches_perfect_training_accuracy() {
    let docs = [
        ("alpha beta gamma", 0),
        ("beta gamma alpha alpha", 0),
        ("delta epsilon zeta", 1),
        ("zeta zeta delta", 1),
        ("gamma alpha", 0),
        ("epsilon delta", 1),
    ];
    let ds = Dataset::new(
        docs.iter()
            .enumerate()
            .map(|(i, (t, l))| Document::new(i.to_string(), *t, Some(*l)))
            .collect(),
        LabelScheme::binary_a(),
        "train",
    )
    .unwrap();
    let cfg = PipelineConfig {
        scheme: LabelScheme::binary_a().kind(),
        preprocess: PreprocessVersion::V2,
        features: vec![FeatureSpec::TfidfWord],
        model: ModelSpec::Gbdt {
            cfg: TrainOverrides {
                n_rounds: Some(30),
                min_leaf: Some(1),
                learning_rate: Some(0.5),
                ..TrainOverrides::default()
            },
        },
        seed: 42,
        min_df: 1,
    };
    let fp = pipeline_fit(&cfg, &ds).unwrap();
    assert_eq!(evaluate(&fp, &ds).unwrap().accuracy, 1.0);
}

#[test]
fn constant_predictions_score_half_on_balanced_data() {
    let golds = [0, 1, 0, 1, 1, 0];
    let m = compute_metrics(&[0; 6], &golds, LabelScheme::binary_a()).unwrap();
    assert_eq!(m.accuracy, 0.5);
}

#[test]
fn evaluate_rejects_unlabeled_documents() {
    let mut ds = small_binary();
    ds.documents[3].label = None;
    assert!(evaluate(fitted_lr(), &ds).is_err());
}

#[test]
fn soft_ensemble_probabilities() {
    let mut cfg = preset("ensemble-a-mono").unwrap();
    if let ModelSpec::Ensemble { members, mode, .. } = &mut cfg.model {
        *mode = mgtdetect_core::ensemble::VotingMode::Soft;
        members[2].model = ModelSpec::Gbdt {
            cfg: TrainOverrides {
                n_rounds: Some(5),
                ..TrainOverrides::default()
            },
        };
    }
    let fp = pipeline_fit(&cfg, &small_binary()).unwrap();
    for p in fp.predict_proba(&["ba ki", "", "zo zo zo"]).unwrap() {
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

#[test]
fn hinge_members_rejected_in_soft_mode() {
    let json = r#"{
        "scheme": "binary_a",
        "features": [{"type": "tfidf_word"}],
        "model": {"type": "ensemble", "mode": "soft", "members": [
            {"model": {"type": "nb"}},
            {"model": {"type": "linear", "loss": "hinge"}}
        ]}
    }"#;
    let cfg = PipelineConfig::from_json(json).unwrap();
    let err = pipeline_fit(&cfg, &small_binary()).unwrap_err();
    assert!(err.to_string().contains("probabilit"), "{err}");
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mgtd");
    save_pipeline(fitted_lr(), &path).unwrap();
    let back = load_pipeline(&path).unwrap();
    assert_eq!(&back, fitted_lr());
    assert!(load_pipeline(dir.path().join("missing.mgtd")).is_err());
}

fn text_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        "\\PC{0,40}",
        "[a-z ]{0,60}",
        prop::collection::vec("(ba|ki|zo|mu|ste|chai|lo)", 0..20).prop_map(|v| v.join(" ")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn predictions_survive_reload(texts in prop::collection::vec(text_strategy(), 0..12)) {
        let fp = fitted_lr();
        let back = FittedPipeline::from_bytes(&fp.to_bytes()).unwrap();
        prop_assert_eq!(back.predict(&texts), fp.predict(&texts));
    }

    #[test]
    fn prediction_is_order_equivariant(
        texts in prop::collection::vec(text_strategy(), 1..12),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let fp = fitted_lr();
        let mut perm: Vec<usize> = (0..texts.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted: Vec<&String> = perm.iter().map(|&i| &texts[i]).collect();
        let base = fp.predict(&texts);
        let got: Vec<usize> = fp.predict(&permuted.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        let expected: Vec<usize> = perm.iter().map(|&i| base[i]).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn metrics_are_permutation_invariant(
        pairs in prop::collection::vec((0usize..2, 0usize..2), 1..50),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = pairs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (p1, g1): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let (p2, g2): (Vec<_>, Vec<_>) = shuffled.into_iter().unzip();
        prop_assert_eq!(
            compute_metrics(&p1, &g1, LabelScheme::binary_a()).unwrap(),
            compute_metrics(&p2, &g2, LabelScheme::binary_a()).unwrap()
        );
    }
}
