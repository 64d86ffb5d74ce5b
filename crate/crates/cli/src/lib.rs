//! `mgtdetect` command-line driver. [`run`] returns the process exit code:
//! 0 on success, 1 on usage errors, 2 on data or model errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mgtdetect_core::corpus::{compute_stats, load_jsonl, LabelScheme, SchemeKind};
use mgtdetect_core::eval::evaluate;
use mgtdetect_core::pipeline::{self, PipelineConfig, PRESETS};
use mgtdetect_core::PreprocessVersion;

pub const THREADS_ENV: &str = "MGTDETECT_THREADS";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// human vs machine
    A,
    /// human plus five generators
    B,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::A => SchemeKind::BinaryA,
            SchemeArg::B => SchemeKind::MultiwayB,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PreprocessArg {
    None,
    V1,
    V2,
}

impl From<PreprocessArg> for PreprocessVersion {
    fn from(p: PreprocessArg) -> Self {
        match p {
            PreprocessArg::None => PreprocessVersion::None,
            PreprocessArg::V1 => PreprocessVersion::V1,
            PreprocessArg::V2 => PreprocessVersion::V2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mgtdetect",
    version,
    about = "Train and evaluate machine-generated text detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print corpus statistics as JSON
    Stats {
        #[arg(long, value_enum, default_value = "a")]
        scheme: SchemeArg,
        input: PathBuf,
    },
    /// Fit a pipeline and write a model file
    Train {
        /// Named configuration (see `presets`)
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        /// Pipeline configuration as JSON
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured label scheme
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Overrides the configured preprocessing
        #[arg(long, value_enum)]
        preprocess: Option<PreprocessArg>,
        /// Defaults to the configured seed, 42 for presets
        #[arg(long)]
        seed: Option<u64>,
        /// Word vectors in text format for embedding features
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        input: PathBuf,
    },
    /// Score a model on a labelled corpus and write metrics JSON
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "metrics.json")]
        out: PathBuf,
        input: PathBuf,
    },
    /// Write one "id<TAB>label" line per document
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Defaults to standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print class names instead of class ids
        #[arg(long)]
        labels_as_names: bool,
        input: PathBuf,
    },
    /// List available presets
    Presets,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(context: impl Display, e: impl Display) -> Self {
        Failure::Data(format!("{context}: {e}"))
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match configure_threads().and_then(|()| dispatch(cli.command)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a non-negative integer")))?;
    // the global pool can only be built once per process; later calls keep it
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Stats { scheme, input } => stats(scheme.into(), &input),
        Command::Train {
            preset,
            config,
            scheme,
            preprocess,
            seed,
            embeddings,
            out,
            input,
        } => {
            let (source, mut cfg) = match (preset, config) {
                (Some(name), _) => {
                    let cfg = pipeline::preset(&name).map_err(|e| Failure::Usage(e.to_string()))?;
                    (format!("preset {name}"), cfg)
                }
                (None, Some(path)) => (format!("config {}", path.display()), read_config(&path)?),
                (None, None) => return Err(Failure::Usage("give --preset or --config".into())),
            };
            if let Some(s) = scheme {
                cfg.scheme = s.into();
            }
            if let Some(p) = preprocess {
                cfg.preprocess = p.into();
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(path) = &embeddings {
                cfg.set_embeddings(path);
            }
            eprintln!(
                "mgtdetect train: {source}, scheme {}, preprocess {}, seed {}",
                cfg.scheme, cfg.preprocess, cfg.seed
            );
            train(&cfg, &input, &out)
        }
        Command::Eval { model, out, input } => eval(&model, &input, &out),
        Command::Predict {
            model,
            out,
            labels_as_names,
            input,
        } => predict(&model, &input, out.as_deref(), labels_as_names),
        Command::Presets => {
            for name in PRESETS {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn read_config(path: &Path) -> Result<PipelineConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::data(path.display(), e))?;
    PipelineConfig::from_json(&text).map_err(|e| Failure::data(path.display(), e))
}

fn stats(scheme: SchemeKind, input: &Path) -> Result<(), Failure> {
    let ds = load_jsonl(input, scheme.into()).map_err(|e| Failure::data(input.display(), e))?;
    let json = serde_json::to_string_pretty(&compute_stats(&ds)).expect("stats serialize");
    println!("{json}");
    Ok(())
}

fn train(cfg: &PipelineConfig, input: &Path, out: &Path) -> Result<(), Failure> {
    let ds = load_jsonl(input, cfg.scheme.into()).map_err(|e| Failure::data(input.display(), e))?;
    let start = Instant::now();
    let fp = pipeline::pipeline_fit(cfg, &ds).map_err(|e| Failure::data(input.display(), e))?;
    log::info!(
        "fitted on {} documents in {:.1}s",
        ds.len(),
        start.elapsed().as_secs_f64()
    );
    pipeline::save_pipeline(&fp, out).map_err(|e| Failure::data(out.display(), e))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn load_model(path: &Path) -> Result<pipeline::FittedPipeline, Failure> {
    pipeline::load_pipeline(path).map_err(|e| Failure::data(path.display(), e))
}

fn eval(model: &Path, input: &Path, out: &Path) -> Result<(), Failure> {
    let fp = load_model(model)?;
    let ds = load_jsonl(input, fp.scheme()).map_err(|e| Failure::data(input.display(), e))?;
    let metrics = evaluate(&fp, &ds).map_err(|e| Failure::data(input.display(), e))?;
    print!("{}", metrics.render_report());
    let mut json = metrics.to_json();
    json.push('\n');
    std::fs::write(out, json).map_err(|e| Failure::data(out.display(), e))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn predict(model: &Path, input: &Path, out: Option<&Path>, names: bool) -> Result<(), Failure> {
    let fp = load_model(model)?;
    let scheme: LabelScheme = fp.scheme();
    let ds = load_jsonl(input, scheme).map_err(|e| Failure::data(input.display(), e))?;
    let preds = fp.predict(&ds.texts());

    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(|e| Failure::data(path.display(), e))?),
        None => Box::new(io::stdout().lock()),
    };
    let target = out.map_or_else(
        || "standard output".to_string(),
        |p| p.display().to_string(),
    );
    let mut w = BufWriter::new(sink);
    for (doc, p) in ds.documents.iter().zip(preds) {
        let written = if names {
            let name = scheme.decode(p).expect("predictions lie within the scheme");
            writeln!(w, "{}\t{name}", doc.id)
        } else {
            writeln!(w, "{}\t{p}", doc.id)
        };
        written.map_err(|e| Failure::data(&target, e))?;
    }
    w.flush().map_err(|e| Failure::data(&target, e))
}
