use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    dim: usize,
    words: Vec<String>,
    data: Vec<f64>,
}

/// Word → dense vector lookup loaded from a pretrained vector file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "EmbeddingRepr", into = "EmbeddingRepr")]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    // row-major, one `dim`-length row per word
    data: Vec<f64>,
    index: HashMap<String, usize>,
}

impl From<EmbeddingRepr> for EmbeddingTable {
    fn from(r: EmbeddingRepr) -> Self {
        let index = r
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Self {
            dim: r.dim,
            words: r.words,
            data: r.data,
            index,
        }
    }
}

impl From<EmbeddingTable> for EmbeddingRepr {
    fn from(t: EmbeddingTable) -> Self {
        Self {
            dim: t.dim,
            words: t.words,
            data: t.data,
        }
    }
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    /// Builds a table from in-memory rows. Rows must all have length `dim`;
    /// the first occurrence of a duplicate word wins.
    pub fn from_rows<I, S>(dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut repr = EmbeddingRepr {
            dim,
            words: Vec::new(),
            data: Vec::new(),
        };
        let mut seen = std::collections::HashSet::new();
        for (word, vec) in rows {
            if vec.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: vec.len(),
                });
            }
            let word = word.into();
            if seen.insert(word.clone()) {
                repr.words.push(word);
                repr.data.extend(vec);
            }
        }
        Ok(repr.into())
    }
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_embeddings(&content)
}

/// Parses the text vector format: a `count dim` header, then one
/// `word v1 .. v_dim` row per line.
pub fn parse_embeddings(content: &str) -> Result<EmbeddingTable> {
    let mut lines = content.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (count, dim) = loop {
        match lines.next() {
            None => return Err(parse_err(1, "missing header".into())),
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((i, l)) => {
                let fields: Vec<&str> = l.split_whitespace().collect();
                let parsed = match fields.as_slice() {
                    [c, d] => c.parse::<usize>().ok().zip(d.parse::<usize>().ok()),
                    _ => None,
                };
                break parsed.ok_or_else(|| {
                    parse_err(
                        i + 1,
                        format!("malformed header {l:?}, expected \"count dim\""),
                    )
                })?;
            }
        }
    };
    if dim == 0 {
        return Err(parse_err(1, "embedding dimension must be positive".into()));
    }

    let mut rows = Vec::with_capacity(count);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().unwrap_or_default();
        let values = fields
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| parse_err(i + 1, format!("invalid number: {e}")))?;
        if values.len() != dim {
            return Err(parse_err(
                i + 1,
                format!("expected {dim} values, found {}", values.len()),
            ));
        }
        rows.push((word.to_string(), values));
    }
    if rows.len() != count {
        log::warn!(
            "embedding header declares {count} rows, file has {}",
            rows.len()
        );
    }
    EmbeddingTable::from_rows(dim, rows)
}

/// Mean of the vectors of in-table tokens. Out-of-table tokens are skipped;
/// with no known token the result is the zero vector.
pub fn embed_average<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> Vec<f64> {
    let mut sum = vec![0.0; table.dim()];
    let mut hits = 0usize;
    for tok in tokens {
        if let Some(v) = table.get(tok.as_ref()) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            hits += 1;
        }
    }
    if hits > 0 {
        let inv = 1.0 / hits as f64;
        sum.iter_mut().for_each(|s| *s *= inv);
    }
    sum
}
