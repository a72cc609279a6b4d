//! Line-delimited corpus ingestion.
//!
//! Input files carry one JSON record per line with the fields `id`,
//! `source` (a string or a list of strings for multi-document inputs),
//! and optionally `summary` and `factuality` (a percentage in `[0, 100]`).

use std::collections::HashSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{tokenize_docs, TokenSeq, TokenizerOptions};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: record id is empty")]
    EmptyId { line: usize },
    #[error("line {line}: duplicate record id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: record {id:?} has an empty source")]
    EmptySource { line: usize, id: String },
    #[error("line {line}: record {id:?} factuality {value} outside [0, 100]")]
    FactualityOutOfRange { line: usize, id: String, value: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Source text of one record: a single document or a list of documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceText {
    Single(String),
    Multi(Vec<String>),
}

impl SourceText {
    pub fn docs(&self) -> Vec<&str> {
        match self {
            SourceText::Single(s) => vec![s.as_str()],
            SourceText::Multi(docs) => docs.iter().map(String::as_str).collect(),
        }
    }

    fn is_blank(&self) -> bool {
        self.docs().iter().all(|d| d.trim().is_empty())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub source: SourceText,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factuality: Option<f64>,
}

impl CorpusRecord {
    /// Tokenize the source documents, optionally truncating them first so
    /// their combined length does not exceed `max_input_words`. The word
    /// budget is split evenly across documents (each keeps at least one
    /// word) and applies to whitespace words of the raw text.
    pub fn source_tokens(
        &self,
        opts: &TokenizerOptions,
        max_input_words: Option<usize>,
    ) -> TokenSeq {
        let docs = self.source.docs();
        match max_input_words {
            None => tokenize_docs(&docs, opts),
            Some(budget) => {
                let truncated = truncate_docs(&docs, budget);
                tokenize_docs(&truncated, opts)
            }
        }
    }

    pub fn summary_tokens(&self, opts: &TokenizerOptions) -> Option<TokenSeq> {
        self.summary
            .as_deref()
            .map(|s| tokenize_docs(&[s], opts))
    }
}

/// Truncate each document to its share of `max_words` whitespace words.
pub fn truncate_docs(docs: &[&str], max_words: usize) -> Vec<String> {
    let per_doc = (max_words / docs.len().max(1)).max(1);
    docs.iter()
        .map(|doc| {
            let words: Vec<&str> = doc.split_whitespace().collect();
            words[..words.len().min(per_doc)].join(" ")
        })
        .collect()
}

/// Read and validate all records, reporting the 1-based line of the first
/// offending record on failure.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        if raw.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(&raw).map_err(|e| CorpusError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
        if record.id.is_empty() {
            return Err(CorpusError::EmptyId { line: line_no });
        }
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        if record.source.is_blank() {
            return Err(CorpusError::EmptySource {
                line: line_no,
                id: record.id,
            });
        }
        if let Some(f) = record.factuality {
            if !f.is_finite() || !(0.0..=100.0).contains(&f) {
                return Err(CorpusError::FactualityOutOfRange {
                    line: line_no,
                    id: record.id,
                    value: f,
                });
            }
        }
        records.push(record);
    }
    Ok(records)
}
