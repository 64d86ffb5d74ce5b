//! Writes a seeded synthetic corpus as `train.jsonl` and `dev.jsonl`.
//!
//! ```text
//! cargo run -p mgtdetect-core --example synth_corpus -- <a|b> <n_docs> <seed> <out_dir>
//! ```

use std::path::PathBuf;

use mgtdetect_core::corpus::{to_jsonl, LabelScheme, SchemeKind};
use mgtdetect_core::synth::{generate, train_test_split, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [scheme, n_docs, seed, out] = args.as_slice() else {
        return Err("usage: synth_corpus <a|b> <n_docs> <seed> <out_dir>".into());
    };
    let scheme = LabelScheme::from(scheme.parse::<SchemeKind>()?);
    let cfg = SynthConfig {
        n_docs: n_docs.parse()?,
        seed: seed.parse()?,
        ..SynthConfig::default()
    };
    let (train, dev) = train_test_split(&generate(&cfg, scheme)?, 0.2)?;
    let out = PathBuf::from(out);
    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("train.jsonl"), to_jsonl(&train))?;
    std::fs::write(out.join("dev.jsonl"), to_jsonl(&dev))?;
    eprintln!(
        "wrote {} train and {} dev documents to {}",
        train.len(),
        dev.len(),
        out.display()
    );
    Ok(())
}
