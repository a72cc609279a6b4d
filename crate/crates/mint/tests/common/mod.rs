//! Shared fixtures for the integration and acceptance suites.

#![allow(dead_code)]

use mint::nac::{offline_penalty, DecodeOutput, NacConfig, ScoringModel, EOS};
use mint::text::{TokenSeq, TokenizerOptions};
use mint::NgramModel;

const SUBJECTS: [&str; 5] = ["mayor", "council", "minister", "committee", "board"];
const VERBS: [&str; 5] = ["announced", "approved", "rejected", "delayed", "reviewed"];
const ADJS: [&str; 4] = ["new", "revised", "controversial", "updated"];
const OBJECTS: [&str; 5] = ["budget", "proposal", "project", "plan", "contract"];
const TAILS: [&str; 4] = [
    "on monday",
    "after the vote",
    "despite objections",
    "in early march",
];

fn slots(i: usize, s: usize) -> (&'static str, &'static str, &'static str, &'static str, &'static str) {
    let k = i * 3 + s;
    (
        SUBJECTS[k % SUBJECTS.len()],
        VERBS[(k / 2) % VERBS.len()],
        ADJS[(k / 3) % ADJS.len()],
        OBJECTS[(k / 5) % OBJECTS.len()],
        TAILS[(k / 7) % TAILS.len()],
    )
}

/// Deterministic news-flavored fixture sources: `n` single-document sources
/// of three active-voice template sentences over a small vocabulary.
pub fn fixture_corpus(n: usize) -> Vec<TokenSeq> {
    let opts = TokenizerOptions::default();
    (0..n)
        .map(|i| {
            let mut text = String::new();
            for s in 0..3 {
                let (subj, verb, adj, obj, tail) = slots(i, s);
                text.push_str(&format!("the {subj} {verb} the {adj} {obj} {tail} . "));
            }
            mint::tokenize(&text, &opts)
        })
        .collect()
}

/// Passive-voice summaries of the fixture sources. They reuse the sources'
/// content words but connect them with wording that never appears in the
/// sources, so a model trained on them has probability mass away from
/// verbatim copying.
pub fn fixture_summaries(n: usize) -> Vec<TokenSeq> {
    let opts = TokenizerOptions::default();
    (0..n)
        .map(|i| {
            let (subj, verb, adj, obj, _) = slots(i, 0);
            let (subj2, verb2, _, obj2, _) = slots(i, 1);
            let text = format!(
                "the {adj} {obj} was {verb} by the {subj} . \
                 officials said the {obj2} was {verb2} by the {subj2} . "
            );
            mint::tokenize(&text, &opts)
        })
        .collect()
}

/// The built-in model trained on the fixture summaries, the output-side
/// language of the toy task. Trigram-heavy interpolation keeps decodes
/// fluent instead of looping on high-frequency unigrams.
pub fn fixture_model(sources: &[TokenSeq], copy_alpha: f64) -> NgramModel {
    let summaries = fixture_summaries(sources.len());
    NgramModel::train(&summaries, 3, 0.1)
        .expect("fixture summaries train")
        .with_interpolation(vec![0.1, 0.3, 0.6])
        .expect("valid weights")
        .with_copy_alpha(copy_alpha)
        .expect("valid copy weight")
}

/// Beam parameters used by the trend experiments.
pub fn trend_config(mode: mint::NacMode, half_life: f64) -> NacConfig {
    NacConfig {
        mode,
        half_life,
        beam_size: 4,
        min_len: 8,
        max_len: 16,
        ..NacConfig::default()
    }
}

/// Records file content for CLI tests: sources with summaries of graded
/// extractiveness plus a factuality column.
pub fn fixture_jsonl(n: usize) -> String {
    let corpus = fixture_corpus(n);
    let mut out = String::new();
    for (i, source) in corpus.iter().enumerate() {
        let tokens = source.tokens();
        let summary = match i % 3 {
            // Verbatim prefix: fully extractive.
            0 => tokens[..tokens.len().min(8)].join(" "),
            // Shuffled slice: partially extractive.
            1 => {
                let mut words: Vec<&str> =
                    tokens[..tokens.len().min(8)].iter().map(|s| s.as_str()).collect();
                words.rotate_left(3);
                words.join(" ")
            }
            // Mostly novel wording.
            _ => format!(
                "officials settled the {} matter quietly",
                tokens[5].as_str()
            ),
        };
        let factuality = 90.0 - 7.0 * (i % 3) as f64 - (i % 5) as f64;
        out.push_str(&format!(
            "{}\n",
            serde_json::json!({
                "id": format!("doc{i:03}"),
                "source": tokens.join(" "),
                "summary": summary,
                "factuality": factuality,
            })
        ));
    }
    out
}

/// Records whose summaries are the passive fixture summaries; training on
/// this file reproduces the trend-experiment model.
pub fn fixture_training_jsonl(n: usize) -> String {
    let sources = fixture_corpus(n);
    let summaries = fixture_summaries(n);
    let mut out = String::new();
    for (i, (source, summary)) in sources.iter().zip(&summaries).enumerate() {
        out.push_str(&format!(
            "{}\n",
            serde_json::json!({
                "id": format!("doc{i:03}"),
                "source": source.tokens().join(" "),
                "summary": summary.tokens().join(" "),
            })
        ));
    }
    out
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// A scoring model whose per-prefix distribution is a deterministic
/// pseudo-random function of its seed. Useful for oracle comparisons: every
/// prefix has a fully defined, reproducible distribution over the vocabulary
/// plus end-of-sequence.
pub struct RandomModel {
    pub vocab: Vec<String>,
    pub seed: u64,
}

impl ScoringModel for RandomModel {
    fn next_distribution(&self, _source: &TokenSeq, prefix: &[String]) -> Vec<(String, f64)> {
        let mut key = self.seed;
        for token in prefix {
            key = splitmix64(key ^ fnv1a(token.as_bytes()));
        }
        let mut weights: Vec<(String, f64)> = self
            .vocab
            .iter()
            .cloned()
            .chain(std::iter::once(EOS.to_string()))
            .enumerate()
            .map(|(i, t)| {
                let w = (splitmix64(key ^ (i as u64 + 1)) % 1000 + 1) as f64;
                (t, w)
            })
            .collect();
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        for (_, w) in &mut weights {
            *w = (*w / total).ln();
        }
        weights
    }
}

/// Exhaustive search over every output of length `min_len..=max_len` drawn
/// from `vocab`, scored exactly like a finished beam hypothesis: summed
/// model log probabilities, the end-of-sequence term for outputs below the
/// length cap, plus the offline constraint penalty. Ties break toward the
/// lexicographically smaller token sequence.
pub fn brute_force_argmax(
    model: &dyn ScoringModel,
    vocab: &[String],
    x: &TokenSeq,
    config: &NacConfig,
) -> DecodeOutput {
    let mut best: Option<DecodeOutput> = None;
    let mut stack: Vec<(Vec<String>, f64)> = vec![(Vec::new(), 0.0)];
    while let Some((prefix, logprob)) = stack.pop() {
        let dist: std::collections::HashMap<String, f64> =
            model.next_distribution(x, &prefix).into_iter().collect();
        if prefix.len() >= config.min_len && prefix.len() < config.max_len {
            let y: TokenSeq = TokenSeq::from_tokens(prefix.clone());
            let candidate = DecodeOutput {
                tokens: prefix.clone(),
                model_logprob: logprob + dist[EOS],
                nac_logdiscount: offline_penalty(x, &y, config),
            };
            best = Some(better(best.take(), candidate));
        }
        if prefix.len() < config.max_len {
            for token in vocab {
                let mut next = prefix.clone();
                next.push(token.clone());
                let lp = logprob + dist[token.as_str()];
                if next.len() == config.max_len {
                    let y = TokenSeq::from_tokens(next.clone());
                    let candidate = DecodeOutput {
                        tokens: next,
                        model_logprob: lp,
                        nac_logdiscount: offline_penalty(x, &y, config),
                    };
                    best = Some(better(best.take(), candidate));
                } else {
                    stack.push((next, lp));
                }
            }
        }
    }
    best.expect("candidate space is nonempty")
}

fn better(current: Option<DecodeOutput>, candidate: DecodeOutput) -> DecodeOutput {
    match current {
        None => candidate,
        Some(cur) => {
            let (a, b) = (candidate.total_score(), cur.total_score());
            if a > b || (a == b && candidate.tokens < cur.tokens) {
                candidate
            } else {
                cur
            }
        }
    }
}
