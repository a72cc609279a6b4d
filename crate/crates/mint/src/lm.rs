//! A self-contained toy scoring model for desk-scale decoding experiments:
//! an interpolated word n-gram model with additive smoothing, mixed with a
//! copy-affinity component over the current source.
//!
//! The copy component puts its mass on tokens that continue the source match
//! in progress (or start one), which gives decodes an extractive bias that
//! the abstractiveness constraints can then push against.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nac::{FragmentTracker, ScoringModel, EOS};
use crate::text::{SourceIndex, TokenSeq};

/// Version tag written into model files.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LmError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("model order must be at least 1")]
    InvalidOrder,
    #[error("smoothing constant must be positive, got {0}")]
    InvalidSmoothing(f64),
    #[error("copy weight must lie in [0, 1], got {0}")]
    InvalidCopyAlpha(f64),
    #[error("interpolation weights must be positive and match the order")]
    InvalidWeights,
    #[error("unsupported model file version {0} (expected {MODEL_FORMAT_VERSION})")]
    UnsupportedVersion(u32),
    #[error("malformed model file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type ContextCounts = BTreeMap<Vec<String>, BTreeMap<String, u64>>;

/// Interpolated additive-smoothed n-gram model with an optional copy
/// component. Immutable after training.
#[derive(Debug, Clone)]
pub struct NgramModel {
    order: usize,
    smoothing: f64,
    copy_alpha: f64,
    /// Per-order mixture weights, one per order `1..=order`, summing to 1.
    interpolation: Vec<f64>,
    /// Vocabulary of the n-gram component, including the end-of-sequence
    /// marker.
    vocab: BTreeSet<String>,
    /// `counts[n - 1]`: context of `n - 1` tokens to next-token counts.
    counts: Vec<ContextCounts>,
    /// Total count per context, kept alongside for O(1) denominators.
    totals: Vec<BTreeMap<Vec<String>, u64>>,
}

impl NgramModel {
    /// Train on a corpus of token sequences. Each sequence contributes its
    /// tokens plus a terminating end-of-sequence event.
    pub fn train(corpus: &[TokenSeq], order: usize, smoothing: f64) -> Result<Self, LmError> {
        if corpus.is_empty() || corpus.iter().all(|s| s.is_empty()) {
            return Err(LmError::EmptyCorpus);
        }
        if order == 0 {
            return Err(LmError::InvalidOrder);
        }
        if smoothing.is_nan() || smoothing <= 0.0 {
            return Err(LmError::InvalidSmoothing(smoothing));
        }

        let mut vocab: BTreeSet<String> = BTreeSet::new();
        vocab.insert(EOS.to_string());
        let mut counts: Vec<ContextCounts> = vec![BTreeMap::new(); order];
        let mut totals: Vec<BTreeMap<Vec<String>, u64>> = vec![BTreeMap::new(); order];

        for seq in corpus {
            let tokens = seq.tokens();
            vocab.extend(tokens.iter().cloned());
            // Events are the tokens followed by EOS; contexts never include
            // the terminator because nothing follows it.
            for i in 0..=tokens.len() {
                let event = if i == tokens.len() { EOS } else { &tokens[i] };
                for n in 1..=order {
                    if i + 1 >= n {
                        let ctx = tokens[i + 1 - n..i].to_vec();
                        *counts[n - 1]
                            .entry(ctx.clone())
                            .or_default()
                            .entry(event.to_string())
                            .or_insert(0) += 1;
                        *totals[n - 1].entry(ctx).or_insert(0) += 1;
                    }
                }
            }
        }

        Ok(Self {
            order,
            smoothing,
            copy_alpha: 0.0,
            interpolation: vec![1.0 / order as f64; order],
            vocab,
            counts,
            totals,
        })
    }

    pub fn with_copy_alpha(mut self, copy_alpha: f64) -> Result<Self, LmError> {
        if !(0.0..=1.0).contains(&copy_alpha) {
            return Err(LmError::InvalidCopyAlpha(copy_alpha));
        }
        self.copy_alpha = copy_alpha;
        Ok(self)
    }

    pub fn with_interpolation(mut self, weights: Vec<f64>) -> Result<Self, LmError> {
        if weights.len() != self.order || weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(LmError::InvalidWeights);
        }
        let sum: f64 = weights.iter().sum();
        self.interpolation = weights.into_iter().map(|w| w / sum).collect();
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn copy_alpha(&self) -> f64 {
        self.copy_alpha
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    /// Probability (linear space) of `event` under the interpolated n-gram
    /// component given the emitted prefix.
    pub fn ngram_prob(&self, prefix: &[String], event: &str) -> f64 {
        let vocab_size = self.vocab.len() as f64;
        // Orders whose full context is available; order 1 always is.
        let usable: Vec<usize> = (1..=self.order)
            .filter(|&n| prefix.len() >= n - 1)
            .collect();
        let weight_sum: f64 = usable.iter().map(|&n| self.interpolation[n - 1]).sum();
        let mut prob = 0.0;
        for &n in &usable {
            let ctx = &prefix[prefix.len() - (n - 1)..];
            let count = self.counts[n - 1]
                .get(ctx)
                .and_then(|m| m.get(event))
                .copied()
                .unwrap_or(0) as f64;
            let total = self.totals[n - 1].get(ctx).copied().unwrap_or(0) as f64;
            let p = (count + self.smoothing) / (total + self.smoothing * vocab_size);
            prob += self.interpolation[n - 1] / weight_sum * p;
        }
        prob
    }

    /// The n-gram component as a full distribution over the vocabulary.
    fn ngram_distribution(&self, prefix: &[String]) -> BTreeMap<&str, f64> {
        self.vocab
            .iter()
            .map(|t| (t.as_str(), self.ngram_prob(prefix, t)))
            .collect()
    }

    /// The copy component: uniform over tokens that extend the source match
    /// in progress, falling back to uniform over all tokens present in the
    /// source. `None` when the source is empty.
    fn copy_distribution<'a>(
        &self,
        source: &'a TokenSeq,
        index: &SourceIndex,
        prefix: &[String],
    ) -> Option<BTreeMap<&'a str, f64>> {
        if source.is_empty() {
            return None;
        }
        let mut tracker = FragmentTracker::new();
        for token in prefix {
            tracker.advance(token, index, source);
        }
        let continuations = tracker.continuations(source);
        let support: BTreeSet<&str> = if continuations.is_empty() {
            source.tokens().iter().map(String::as_str).collect()
        } else {
            continuations
        };
        let p = 1.0 / support.len() as f64;
        Some(support.into_iter().map(|t| (t, p)).collect())
    }

    /// Log perplexity of held-out sequences (including the end-of-sequence
    /// events) under the full mixture with `copy_alpha = 0`.
    pub fn perplexity(&self, heldout: &[TokenSeq]) -> f64 {
        let mut log_sum = 0.0;
        let mut events = 0usize;
        for seq in heldout {
            let tokens = seq.tokens();
            for i in 0..=tokens.len() {
                let event = if i == tokens.len() { EOS } else { &tokens[i] };
                log_sum += self.ngram_prob(&tokens[..i], event).ln();
                events += 1;
            }
        }
        (-log_sum / events as f64).exp()
    }

    pub fn save(&self, path: &Path) -> Result<(), LmError> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<(), LmError> {
        let file = ModelFile::from(self);
        let json = serde_json::to_string(&file).map_err(|e| LmError::Malformed(e.to_string()))?;
        writer.write_all(json.as_bytes())?;
        writer.write_all(b"\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, LmError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }

    pub fn read_from<R: Read>(mut reader: R) -> Result<Self, LmError> {
        let mut raw = String::new();
        reader.read_to_string(&mut raw)?;
        let file: ModelFile =
            serde_json::from_str(&raw).map_err(|e| LmError::Malformed(e.to_string()))?;
        file.try_into()
    }
}

impl ScoringModel for NgramModel {
    fn next_distribution(&self, source: &TokenSeq, prefix: &[String]) -> Vec<(String, f64)> {
        let ngram = self.ngram_distribution(prefix);
        let index = SourceIndex::build(source);
        let copy = if self.copy_alpha > 0.0 {
            self.copy_distribution(source, &index, prefix)
        } else {
            None
        };
        let alpha = if copy.is_some() { self.copy_alpha } else { 0.0 };

        let mut mixture: BTreeMap<&str, f64> = BTreeMap::new();
        for (token, p) in &ngram {
            mixture.insert(token, (1.0 - alpha) * p);
        }
        if let Some(copy) = &copy {
            for (token, p) in copy {
                *mixture.entry(token).or_insert(0.0) += alpha * p;
            }
        }
        mixture
            .into_iter()
            .map(|(t, p)| (t.to_string(), p.ln()))
            .collect()
    }
}

/// Count table of one order, flattened into sorted arrays for the file.
type FlatCounts = Vec<(Vec<String>, Vec<(String, u64)>)>;

/// On-disk representation: a single versioned JSON document with the count
/// tables flattened into sorted arrays.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    order: usize,
    smoothing: f64,
    copy_alpha: f64,
    interpolation: Vec<f64>,
    vocab: Vec<String>,
    counts: Vec<FlatCounts>,
}

impl From<&NgramModel> for ModelFile {
    fn from(model: &NgramModel) -> Self {
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            order: model.order,
            smoothing: model.smoothing,
            copy_alpha: model.copy_alpha,
            interpolation: model.interpolation.clone(),
            vocab: model.vocab.iter().cloned().collect(),
            counts: model
                .counts
                .iter()
                .map(|table| {
                    table
                        .iter()
                        .map(|(ctx, nexts)| {
                            (
                                ctx.clone(),
                                nexts.iter().map(|(t, c)| (t.clone(), *c)).collect(),
                            )
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<ModelFile> for NgramModel {
    type Error = LmError;

    fn try_from(file: ModelFile) -> Result<Self, LmError> {
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(LmError::UnsupportedVersion(file.format_version));
        }
        if file.order == 0 || file.counts.len() != file.order {
            return Err(LmError::Malformed("order/count table mismatch".into()));
        }
        let mut counts: Vec<ContextCounts> = vec![BTreeMap::new(); file.order];
        let mut totals: Vec<BTreeMap<Vec<String>, u64>> = vec![BTreeMap::new(); file.order];
        for (n, table) in file.counts.into_iter().enumerate() {
            for (ctx, nexts) in table {
                if ctx.len() != n {
                    return Err(LmError::Malformed(format!(
                        "context {ctx:?} has wrong length for order {}",
                        n + 1
                    )));
                }
                let total: u64 = nexts.iter().map(|(_, c)| c).sum();
                counts[n].insert(ctx.clone(), nexts.into_iter().collect());
                totals[n].insert(ctx, total);
            }
        }
        let model = NgramModel {
            order: file.order,
            smoothing: file.smoothing,
            copy_alpha: 0.0,
            interpolation: vec![1.0 / file.order as f64; file.order],
            vocab: file.vocab.into_iter().collect(),
            counts,
            totals,
        };
        if file.smoothing.is_nan() || file.smoothing <= 0.0 {
            return Err(LmError::InvalidSmoothing(file.smoothing));
        }
        model
            .with_interpolation(file.interpolation)?
            .with_copy_alpha(file.copy_alpha)
    }
}
