//! Text cleaning regimes.
//!
//! * `V2` applies heuristic cleaning only.
//! * `V1` applies heuristic cleaning followed by short/symbol-only token removal.
//! * `None` passes text through untouched.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreprocessVersion {
    V1,
    V2,
    #[default]
    None,
}

impl FromStr for PreprocessVersion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "v1" => Ok(Self::V1),
            "v2" => Ok(Self::V2),
            "none" => Ok(Self::None),
            other => Err(Error::Config(format!(
                "unknown preprocess version {other:?} (expected none, v1 or v2)"
            ))),
        }
    }
}

impl fmt::Display for PreprocessVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::V1 => "v1",
            Self::V2 => "v2",
            Self::None => "none",
        })
    }
}

/// Drops control characters, collapses whitespace runs to one space, trims,
/// then NFC-normalizes. Control characters that are also whitespace
/// (`\n`, `\t`, `\r`, ...) act as separators instead of being deleted.
///
/// Normalization runs last: deleting a control character can bring a base
/// character next to a combining mark, and composing afterwards keeps the
/// function idempotent.
pub fn clean_heuristic(text: &str) -> String {
    let filtered: String = text
        .chars()
        .filter(|c| !c.is_control() || c.is_whitespace())
        .collect();
    let mut collapsed = String::with_capacity(filtered.len());
    for word in filtered.split_whitespace() {
        if !collapsed.is_empty() {
            collapsed.push(' ');
        }
        collapsed.push_str(word);
    }
    collapsed.nfc().collect()
}

/// Drops single-character non-numeric tokens and tokens with no
/// alphanumeric character. Expects heuristic-cleaned input.
pub fn remove_subwords(text: &str) -> String {
    text.split(' ')
        .filter(|tok| keep_token(tok))
        .collect::<Vec<_>>()
        .join(" ")
}

fn keep_token(tok: &str) -> bool {
    let mut chars = tok.chars();
    match (chars.next(), chars.next()) {
        (None, _) => false,
        (Some(c), None) => c.is_numeric(),
        _ => tok.chars().any(char::is_alphanumeric),
    }
}

pub fn preprocess(text: &str, version: PreprocessVersion) -> String {
    match version {
        PreprocessVersion::None => text.to_string(),
        PreprocessVersion::V2 => clean_heuristic(text),
        PreprocessVersion::V1 => remove_subwords(&clean_heuristic(text)),
    }
}
