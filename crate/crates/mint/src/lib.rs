//! Measuring and controlling the abstractiveness of generated summaries,
//! and quantifying its tradeoff against factuality.
//!
//! The toolkit has three parts:
//!
//! * **Measuring** ([`score`], [`text`]): the MINT score, one minus the
//!   harmonic mean of smoothed n-gram precisions and the LCS ratio between a
//!   summary and its source, together with the fragment density metric.
//! * **Controlling** ([`nac`], [`lm`]): soft decoding-time constraints that
//!   discount extractive fragments nonlinearly in their length, applied
//!   inside a beam search over any model that can score next tokens. A small
//!   trainable n-gram model with a copy component makes decoding
//!   experiments self-contained.
//! * **Quantifying** ([`tradeoff`]): abstractiveness-adjusted factuality
//!   (mu-scores), least-squares trend lines over (abstractiveness,
//!   factuality) series, and the factuality-at-50%-abstractiveness readout.
//!
//! The [`corpus`] and [`cli`] modules provide the line-delimited record
//! format and the CSV-emitting commands used by the `mint` binary; see the
//! crate examples for library usage.

pub mod cli;
pub mod corpus;
pub mod lm;
pub mod nac;
pub mod score;
pub mod text;
pub mod tradeoff;

pub use corpus::{read_jsonl, CorpusRecord, SourceText};
pub use lm::NgramModel;
pub use nac::{
    beam_decode, fragment_discount, log_fragment_discount, offline_penalty, DecodeOutput,
    FragmentTracker, NacConfig, NacMode, ScoringModel, EOS,
};
pub use score::{corpus_mint, mint_score, MintAggregate, MintReport};
pub use text::{
    greedy_fragments, lcs_length, matched_ngram_count, tokenize, tokenize_docs, Fragment,
    FragmentSet, SourceIndex, TokenSeq, TokenizerOptions,
};
pub use tradeoff::{f_at, fit_trend, mu_score, pearson_r, TradeoffPoint, TrendFit};
