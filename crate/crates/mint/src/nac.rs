//! Nonlinear abstractiveness constraints: the fragment-length discount
//! schedule, incremental fragment tracking during decoding, offline penalty
//! computation, and a beam-search decoder over a pluggable scoring model.
//!
//! A fragment of `len` extracted tokens receives the discount probability
//! `2^(-(len/h)^e)`; `h` is the half-life (the fragment length discounted to
//! exactly 0.5) and `e` defaults to 2. The discount factors multiply over
//! all extractive fragments of the output, so the discount decomposes
//! token-by-token as the telescoping ratio `discount(l) / discount(l - 1)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::text::{greedy_fragments, SourceIndex, TokenSeq};

/// End-of-sequence marker used by scoring models. The tokenizer can never
/// produce it as a single token, so it cannot collide with source text.
pub const EOS: &str = "</s>";

#[derive(Debug, Error, PartialEq)]
pub enum NacError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model yields no valid continuation")]
    NoValidContinuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NacMode {
    /// Constraint disabled; fragment tracking still runs but contributes 0.
    #[default]
    Off,
    /// Discount extractive fragments (more abstractive output).
    Penalty,
    /// Reward extraction with the inverse discount (more extractive output).
    Reward,
}

impl NacMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            NacMode::Off => "off",
            NacMode::Penalty => "penalty",
            NacMode::Reward => "reward",
        }
    }
}

impl std::str::FromStr for NacMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(NacMode::Off),
            "penalty" => Ok(NacMode::Penalty),
            "reward" => Ok(NacMode::Reward),
            other => Err(format!("unknown mode {other:?} (expected off|penalty|reward)")),
        }
    }
}

/// Constraint and beam-search parameters.
#[derive(Debug, Clone)]
pub struct NacConfig {
    pub mode: NacMode,
    /// Fragment length at which the discount reaches 0.5.
    pub half_life: f64,
    /// Exponent of the discount curve; larger values steepen the descent
    /// around the half-life.
    pub exponent: f64,
    pub beam_size: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Optional length-normalization exponent for beam ranking. Divides only
    /// the model term; the constraint term is never normalized.
    pub length_norm: Option<f64>,
}

impl Default for NacConfig {
    fn default() -> Self {
        Self {
            mode: NacMode::Off,
            half_life: 2.0,
            exponent: 2.0,
            beam_size: 4,
            min_len: 1,
            max_len: 100,
            length_norm: None,
        }
    }
}

impl NacConfig {
    pub fn with_mode(mode: NacMode, half_life: f64) -> Self {
        Self {
            mode,
            half_life,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), NacError> {
        if self.half_life.is_nan() || self.half_life <= 0.0 {
            return Err(NacError::InvalidConfig(format!(
                "half-life must be positive, got {}",
                self.half_life
            )));
        }
        if self.exponent.is_nan() || self.exponent <= 0.0 {
            return Err(NacError::InvalidConfig(format!(
                "exponent must be positive, got {}",
                self.exponent
            )));
        }
        if self.beam_size == 0 {
            return Err(NacError::InvalidConfig("beam size must be at least 1".into()));
        }
        if self.min_len > self.max_len {
            return Err(NacError::InvalidConfig(format!(
                "min length {} exceeds max length {}",
                self.min_len, self.max_len
            )));
        }
        Ok(())
    }

    /// Discount probability for a fragment of `len` tokens.
    pub fn discount(&self, len: usize) -> f64 {
        fragment_discount(len, self.half_life, self.exponent)
    }

    /// Natural log of [`NacConfig::discount`].
    pub fn log_discount(&self, len: usize) -> f64 {
        log_fragment_discount(len, self.half_life, self.exponent)
    }
}

/// Discount probability `2^(-(len/half_life)^exponent)` assigned to an
/// extractive fragment of `len` tokens. `discount(0) = 1` and
/// `discount(half_life) = 0.5`.
pub fn fragment_discount(len: usize, half_life: f64, exponent: f64) -> f64 {
    (-(len as f64 / half_life).powf(exponent)).exp2()
}

/// Natural log of the fragment discount: `-(len/half_life)^exponent * ln 2`.
pub fn log_fragment_discount(len: usize, half_life: f64, exponent: f64) -> f64 {
    -(len as f64 / half_life).powf(exponent) * std::f64::consts::LN_2
}

/// Incremental state of the extractive fragment currently in progress while
/// emitting tokens left to right.
///
/// `match_ends` holds every source position where the current fragment's
/// last token can sit; it is empty exactly when no fragment is in progress.
#[derive(Debug, Clone, Default)]
pub struct FragmentTracker {
    match_ends: Vec<usize>,
    current_len: usize,
}

impl FragmentTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current_len(&self) -> usize {
        self.current_len
    }

    /// Advance the match state with the next emitted token and return the new
    /// fragment length (0 when the token does not occur in the source).
    ///
    /// On a failed extension the tracker restarts at the current token alone;
    /// this mirrors the greedy offline decomposition, which resumes scanning
    /// right after each longest fragment.
    pub fn advance(&mut self, token: &str, index: &SourceIndex, x: &TokenSeq) -> usize {
        if self.current_len > 0 {
            let extended: Vec<usize> = self
                .match_ends
                .iter()
                .filter_map(|&p| {
                    let q = p + 1;
                    (q < x.len() && !x.starts_new_doc(q) && x.tokens()[q] == *token).then_some(q)
                })
                .collect();
            if !extended.is_empty() {
                self.match_ends = extended;
                self.current_len += 1;
                return self.current_len;
            }
        }
        let starts = index.positions(token);
        if starts.is_empty() {
            self.match_ends.clear();
            self.current_len = 0;
        } else {
            self.match_ends = starts.to_vec();
            self.current_len = 1;
        }
        self.current_len
    }

    /// Source tokens that would extend the fragment in progress; empty when
    /// no fragment is open or every match sits at a document end.
    pub fn continuations<'x>(&self, x: &'x TokenSeq) -> BTreeSet<&'x str> {
        if self.current_len == 0 {
            return BTreeSet::new();
        }
        self.match_ends
            .iter()
            .filter_map(|&p| {
                let q = p + 1;
                (q < x.len() && !x.starts_new_doc(q)).then(|| x.tokens()[q].as_str())
            })
            .collect()
    }

    /// Advance with `token` and return the log factor the constraint
    /// contributes at this position.
    ///
    /// Extending a fragment to length `l` contributes
    /// `log_discount(l) - log_discount(l - 1)`, so the factors of one
    /// fragment telescope to `log_discount(|fragment|)`. The factor is
    /// negated in reward mode and zero when the constraint is off.
    pub fn step(
        &mut self,
        token: &str,
        index: &SourceIndex,
        x: &TokenSeq,
        config: &NacConfig,
    ) -> f64 {
        let prev_len = self.current_len;
        let new_len = self.advance(token, index, x);
        if new_len == 0 {
            return 0.0;
        }
        let raw = if new_len == prev_len + 1 {
            config.log_discount(new_len) - config.log_discount(prev_len)
        } else {
            debug_assert_eq!(new_len, 1);
            config.log_discount(1)
        };
        match config.mode {
            NacMode::Off => 0.0,
            NacMode::Penalty => raw,
            NacMode::Reward => -raw,
        }
    }
}

/// Total constraint contribution of `y` against `x`: the sum of log
/// discounts over the greedy fragment decomposition (negated in reward mode,
/// 0 when off).
pub fn offline_penalty(x: &TokenSeq, y: &TokenSeq, config: &NacConfig) -> f64 {
    if config.mode == NacMode::Off {
        return 0.0;
    }
    let total: f64 = greedy_fragments(x, y)
        .fragments()
        .iter()
        .map(|f| config.log_discount(f.length))
        .sum();
    match config.mode {
        NacMode::Off => 0.0,
        NacMode::Penalty => total,
        NacMode::Reward => -total,
    }
}

/// Next-token scorer driving the beam search.
///
/// Given the source and the emitted prefix, implementations return the log
/// probability of every candidate continuation, including [`EOS`]. The
/// probabilities must sum to 1 (within 1e-6) in probability space.
pub trait ScoringModel {
    fn next_distribution(&self, source: &TokenSeq, prefix: &[String]) -> Vec<(String, f64)>;
}

/// A finished decode with its score breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    pub tokens: Vec<String>,
    /// Sum of model log probabilities, including end-of-sequence when the
    /// hypothesis finished before the length cap.
    pub model_logprob: f64,
    /// Accumulated constraint term: non-positive under penalty, non-negative
    /// under reward, exactly 0 when off.
    pub nac_logdiscount: f64,
}

impl DecodeOutput {
    pub fn total_score(&self) -> f64 {
        self.model_logprob + self.nac_logdiscount
    }
}

#[derive(Debug, Clone)]
struct Hypothesis {
    tokens: Vec<String>,
    model_logprob: f64,
    nac_logdiscount: f64,
    tracker: FragmentTracker,
}

fn ranking_score(model_logprob: f64, nac_logdiscount: f64, len: usize, config: &NacConfig) -> f64 {
    let model_term = match config.length_norm {
        Some(alpha) if len > 0 => model_logprob / (len as f64).powf(alpha),
        _ => model_logprob,
    };
    model_term + nac_logdiscount
}

/// Beam search for the output that maximizes model log probability plus the
/// constraint term.
///
/// Candidate extensions add the model log probability and the tracker's log
/// factor; hypotheses may finish via [`EOS`] only once `min_len` tokens are
/// emitted, and any hypothesis reaching `max_len` is force-finished without
/// an end-of-sequence term. Ties are broken by lexicographic token order, so
/// decoding is deterministic.
pub fn beam_decode(
    model: &dyn ScoringModel,
    x: &TokenSeq,
    config: &NacConfig,
) -> Result<DecodeOutput, NacError> {
    config.validate()?;
    let index = SourceIndex::build(x);

    let mut active = vec![Hypothesis {
        tokens: Vec::new(),
        model_logprob: 0.0,
        nac_logdiscount: 0.0,
        tracker: FragmentTracker::new(),
    }];
    let mut finished: Vec<DecodeOutput> = Vec::new();

    for _ in 0..config.max_len {
        if active.is_empty() {
            break;
        }
        let mut candidates: Vec<Hypothesis> = Vec::new();
        for hyp in &active {
            let mut dist = model.next_distribution(x, &hyp.tokens);
            dist.sort_by(|a, b| a.0.cmp(&b.0));
            for (token, logp) in dist {
                if token == EOS {
                    if hyp.tokens.len() >= config.min_len {
                        finished.push(DecodeOutput {
                            tokens: hyp.tokens.clone(),
                            model_logprob: hyp.model_logprob + logp,
                            nac_logdiscount: hyp.nac_logdiscount,
                        });
                    }
                    continue;
                }
                let mut next = hyp.clone();
                next.tokens.push(token);
                next.model_logprob += logp;
                let factor = next
                    .tracker
                    .step(next.tokens.last().unwrap(), &index, x, config);
                next.nac_logdiscount += factor;
                candidates.push(next);
            }
        }
        candidates.sort_by(|a, b| {
            let sa = ranking_score(a.model_logprob, a.nac_logdiscount, a.tokens.len(), config);
            let sb = ranking_score(b.model_logprob, b.nac_logdiscount, b.tokens.len(), config);
            sb.partial_cmp(&sa)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.tokens.cmp(&b.tokens))
        });
        candidates.truncate(config.beam_size);
        active = candidates;
    }

    // Length cap reached: remaining hypotheses finish as they stand.
    finished.extend(active.into_iter().map(|hyp| DecodeOutput {
        tokens: hyp.tokens,
        model_logprob: hyp.model_logprob,
        nac_logdiscount: hyp.nac_logdiscount,
    }));

    finished
        .into_iter()
        .min_by(|a, b| {
            let sa = ranking_score(a.model_logprob, a.nac_logdiscount, a.tokens.len(), config);
            let sb = ranking_score(b.model_logprob, b.nac_logdiscount, b.tokens.len(), config);
            sb.partial_cmp(&sa)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.tokens.cmp(&b.tokens))
        })
        .ok_or(NacError::NoValidContinuation)
}
