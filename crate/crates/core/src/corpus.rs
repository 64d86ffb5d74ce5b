//! JSONL corpus ingestion, label schemes and corpus statistics.
//!
//! Input files carry one JSON object per line. Recognized fields are
//! `id`, `text`, `label`, `model`, `source` and `language`; anything else is
//! ignored. `model` is stored as [`Document::generator`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::features::tokenize_words;

const BINARY_A_CLASSES: [&str; 2] = ["human", "machine"];
const MULTIWAY_B_CLASSES: [&str; 6] = ["human", "chatGPT", "cohere", "davinci", "bloomz", "dolly"];

/// Which label set a dataset is annotated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Human vs. machine.
    BinaryA,
    /// Human plus five named generators.
    MultiwayB,
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "binary_a" | "binary" => Ok(SchemeKind::BinaryA),
            "b" | "multiway_b" | "multiway" => Ok(SchemeKind::MultiwayB),
            other => Err(Error::Config(format!("unknown label scheme {other:?}"))),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::BinaryA => f.write_str("binary_a"),
            SchemeKind::MultiwayB => f.write_str("multiway_b"),
        }
    }
}

/// Ordered class names; a class id is the position in that list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelScheme {
    kind: SchemeKind,
}

impl LabelScheme {
    pub fn new(kind: SchemeKind) -> Self {
        Self { kind }
    }

    pub fn binary_a() -> Self {
        Self::new(SchemeKind::BinaryA)
    }

    pub fn multiway_b() -> Self {
        Self::new(SchemeKind::MultiwayB)
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn class_names(&self) -> &'static [&'static str] {
        match self.kind {
            SchemeKind::BinaryA => &BINARY_A_CLASSES,
            SchemeKind::MultiwayB => &MULTIWAY_B_CLASSES,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.class_names().len()
    }

    pub fn encode(&self, name: &str) -> Result<usize> {
        self.class_names()
            .iter()
            .position(|&c| c == name)
            .ok_or_else(|| Error::UnknownLabel(format!("{name:?}")))
    }

    pub fn decode(&self, id: usize) -> Result<&'static str> {
        self.class_names()
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(id.to_string()))
    }
}

impl From<SchemeKind> for LabelScheme {
    fn from(kind: SchemeKind) -> Self {
        Self::new(kind)
    }
}

pub fn encode_label(name: &str, scheme: &LabelScheme) -> Result<usize> {
    scheme.encode(name)
}

pub fn decode_label(id: usize, scheme: &LabelScheme) -> Result<&'static str> {
    scheme.decode(id)
}

/// One text sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub label: Option<usize>,
    pub generator: Option<String>,
    pub source: Option<String>,
    pub language: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Option<usize>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            label,
            generator: None,
            source: None,
            language: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub documents: Vec<Document>,
    pub scheme: LabelScheme,
    pub split_name: String,
}

impl Dataset {
    /// Builds a dataset, checking id uniqueness and that every label fits
    /// the scheme.
    pub fn new(
        documents: Vec<Document>,
        scheme: LabelScheme,
        split_name: impl Into<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
            if let Some(label) = doc.label {
                scheme.decode(label)?;
            }
        }
        Ok(Self {
            documents,
            scheme,
            split_name: split_name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.text.as_str()).collect()
    }

    /// Gold labels for every document; errors on the first unlabeled one.
    pub fn labels(&self) -> Result<Vec<usize>> {
        self.documents
            .iter()
            .map(|d| d.label.ok_or_else(|| Error::Unlabeled(d.id.clone())))
            .collect()
    }
}

/// Guesses a split name from a file stem ("subtaskA_dev_monolingual" → "dev").
fn split_from_path(path: &Path) -> String {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_ascii_lowercase();
    ["train", "dev", "test"]
        .into_iter()
        .find(|s| stem.contains(s))
        .unwrap_or("test")
        .to_string()
}

pub fn load_jsonl(path: impl AsRef<Path>, scheme: LabelScheme) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut ds = parse_jsonl(&bytes, scheme)?;
    ds.split_name = split_from_path(path);
    Ok(ds)
}

/// Parses JSONL content already in memory. Blank lines are skipped; line
/// numbers in errors are 1-based, synthesized ids are 0-based.
pub fn parse_jsonl(bytes: &[u8], scheme: LabelScheme) -> Result<Dataset> {
    let mut documents = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let line = std::str::from_utf8(raw).map_err(|e| Error::Parse {
            line: line_no,
            message: format!("invalid UTF-8: {e}"),
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        documents.push(parse_line(line, idx, scheme)?);
    }
    Dataset::new(documents, scheme, "train")
}

fn parse_line(line: &str, idx: usize, scheme: LabelScheme) -> Result<Document> {
    let line_no = idx + 1;
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let value: Value = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
    let Value::Object(mut obj) = value else {
        return Err(parse_err("expected a JSON object".into()));
    };
    let text = match obj.remove("text") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(parse_err("field \"text\" must be a string".into())),
        None => return Err(parse_err("missing field \"text\"".into())),
    };
    let id = match obj.remove("id") {
        Some(Value::String(s)) => s,
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::Null) | None => idx.to_string(),
        Some(_) => return Err(parse_err("field \"id\" must be a string or number".into())),
    };
    let label = match obj.remove("label") {
        None | Some(Value::Null) => None,
        Some(Value::Number(n)) => {
            let id = n
                .as_u64()
                .ok_or_else(|| Error::UnknownLabel(n.to_string()))? as usize;
            scheme.decode(id)?;
            Some(id)
        }
        Some(Value::String(s)) => Some(scheme.encode(&s)?),
        Some(other) => return Err(Error::UnknownLabel(other.to_string())),
    };
    let mut opt_string = |key: &str| -> Result<Option<String>> {
        match obj.remove(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(parse_err(format!("field {key:?} must be a string"))),
        }
    };
    Ok(Document {
        id,
        text,
        label,
        generator: opt_string("model")?,
        source: opt_string("source")?,
        language: opt_string("language")?,
    })
}

/// Serializes documents back to the JSONL layout `load_jsonl` reads.
pub fn to_jsonl(ds: &Dataset) -> String {
    let mut out = String::new();
    for doc in &ds.documents {
        let mut obj = serde_json::Map::new();
        obj.insert("id".into(), Value::String(doc.id.clone()));
        obj.insert("text".into(), Value::String(doc.text.clone()));
        if let Some(label) = doc.label {
            obj.insert("label".into(), Value::from(label));
        }
        for (key, val) in [
            ("model", &doc.generator),
            ("source", &doc.source),
            ("language", &doc.language),
        ] {
            if let Some(v) = val {
                obj.insert(key.into(), Value::String(v.clone()));
            }
        }
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TokenCount {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub split: String,
    pub n_docs: usize,
    /// Labeled documents per class id; unlabeled documents are not counted.
    pub per_class: BTreeMap<usize, usize>,
    pub token_count: TokenCount,
    /// Documents with zero tokens under the word tokenizer.
    pub n_empty: usize,
}

pub fn compute_stats(ds: &Dataset) -> CorpusStats {
    compute_stats_with(ds, tokenize_words)
}

pub fn compute_stats_with<F, T>(ds: &Dataset, tokenizer: F) -> CorpusStats
where
    F: Fn(&str) -> Vec<T>,
{
    let mut per_class = BTreeMap::new();
    let mut n_empty = 0;
    let mut min = usize::MAX;
    let mut max = 0;
    let mut total = 0usize;
    for doc in &ds.documents {
        if let Some(label) = doc.label {
            *per_class.entry(label).or_insert(0) += 1;
        }
        let n = tokenizer(&doc.text).len();
        if n == 0 {
            n_empty += 1;
        }
        min = min.min(n);
        max = max.max(n);
        total += n;
    }
    let token_count = if ds.is_empty() {
        TokenCount::default()
    } else {
        TokenCount {
            min,
            max,
            mean: total as f64 / ds.len() as f64,
        }
    };
    CorpusStats {
        split: ds.split_name.clone(),
        n_docs: ds.len(),
        per_class,
        token_count,
        n_empty,
    }
}
