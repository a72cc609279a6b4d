//! The MINT abstractiveness score and the density metric.
//!
//! MINT is one minus the harmonic mean of smoothed n-gram precisions
//! (n = 1..4) and the length-normalized longest-common-subsequence ratio:
//! 0 for a contiguous in-order extraction, approaching 1 for fully novel
//! text. Density is the sum of squared extractive-fragment lengths divided
//! by summary length.

use thiserror::Error;

use crate::text::{greedy_fragments, lcs_length, matched_ngram_count, TokenSeq};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("summary has no tokens")]
    EmptySummary,
    #[error("corpus has no pairs")]
    EmptyCorpus,
}

/// Per-pair metric bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct MintReport {
    /// Smoothed n-gram precisions, in `[0, 1]`.
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    /// LCS length divided by summary length.
    pub lcsr: f64,
    /// Harmonic mean of `(p1, p2, p3, p4, lcsr)`; 0 if any component is 0.
    pub chi: f64,
    /// `1 - chi`.
    pub mint: f64,
    /// Sum of squared fragment lengths per summary token.
    pub density: f64,
    pub fragment_count: usize,
    pub summary_len: usize,
}

/// Field-wise arithmetic means over a corpus of reports.
#[derive(Debug, Clone, PartialEq)]
pub struct MintAggregate {
    pub n_pairs: usize,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub lcsr: f64,
    pub chi: f64,
    pub mint: f64,
    pub density: f64,
    pub fragment_count: f64,
    pub summary_len: f64,
}

/// Smooth the matched n-gram counts `m1..m4` so that higher orders never
/// collapse to zero.
///
/// Each smoothed count is the average of the raw count, the smoothed count
/// one order below, and the raw count one order above; the chain starts at
/// `s0 = m1 + 1`, and `matched_5` is the raw matched 5-gram count.
pub fn smoothed_match_chain(matched: [usize; 4], matched_5: usize) -> [f64; 4] {
    let raw = [
        matched[0] as f64,
        matched[1] as f64,
        matched[2] as f64,
        matched[3] as f64,
        matched_5 as f64,
    ];
    let mut smoothed = [0.0; 4];
    let mut prev = raw[0] + 1.0;
    for n in 0..4 {
        prev = (prev + raw[n] + raw[n + 1]) / 3.0;
        smoothed[n] = prev;
    }
    smoothed
}

/// Score one (source, summary) pair.
pub fn mint_score(x: &TokenSeq, y: &TokenSeq) -> Result<MintReport, ScoreError> {
    if y.is_empty() {
        return Err(ScoreError::EmptySummary);
    }

    let mut matched = [0usize; 4];
    let mut totals = [0usize; 4];
    for n in 1..=4 {
        let (m, t) = matched_ngram_count(x, y, n);
        matched[n - 1] = m;
        totals[n - 1] = t;
    }
    let (matched_5, _) = matched_ngram_count(x, y, 5);

    let smoothed = smoothed_match_chain(matched, matched_5);
    // A summary shorter than n has no n-grams at all; the smoothed count is
    // then taken over a denominator of 1 to keep the harmonic mean defined.
    // The cap matters only for boundary-carrying summaries, whose excluded
    // n-grams can shrink a total faster than the smoothing chain decays;
    // for ordinary flat summaries the ratio never exceeds 1.
    let precision = |n: usize| {
        let total = totals[n - 1];
        (smoothed[n - 1] / if total == 0 { 1.0 } else { total as f64 }).min(1.0)
    };
    let p = [precision(1), precision(2), precision(3), precision(4)];

    let lcsr = lcs_length(x, y) as f64 / y.len() as f64;

    let chi = harmonic_mean(&[p[0], p[1], p[2], p[3], lcsr]);
    let fragments = greedy_fragments(x, y);
    let density = fragments.squared_length_sum() as f64 / y.len() as f64;

    Ok(MintReport {
        p1: p[0],
        p2: p[1],
        p3: p[2],
        p4: p[3],
        lcsr,
        chi,
        mint: 1.0 - chi,
        density,
        fragment_count: fragments.len(),
        summary_len: y.len(),
    })
}

/// Score every pair and average each report field.
pub fn corpus_mint<'a, I>(pairs: I) -> Result<MintAggregate, ScoreError>
where
    I: IntoIterator<Item = (&'a TokenSeq, &'a TokenSeq)>,
{
    let reports = pairs
        .into_iter()
        .map(|(x, y)| mint_score(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    aggregate_reports(&reports)
}

/// Field-wise mean of already-computed reports.
pub fn aggregate_reports(reports: &[MintReport]) -> Result<MintAggregate, ScoreError> {
    if reports.is_empty() {
        return Err(ScoreError::EmptyCorpus);
    }
    let n = reports.len() as f64;
    let mean = |f: fn(&MintReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(MintAggregate {
        n_pairs: reports.len(),
        p1: mean(|r| r.p1),
        p2: mean(|r| r.p2),
        p3: mean(|r| r.p3),
        p4: mean(|r| r.p4),
        lcsr: mean(|r| r.lcsr),
        chi: mean(|r| r.chi),
        mint: mean(|r| r.mint),
        density: mean(|r| r.density),
        fragment_count: mean(|r| r.fragment_count as f64),
        summary_len: mean(|r| r.summary_len as f64),
    })
}

/// Harmonic mean, defined as 0 when any component is 0.
fn harmonic_mean(values: &[f64]) -> f64 {
    if values.contains(&0.0) {
        return 0.0;
    }
    values.len() as f64 / values.iter().map(|v| 1.0 / v).sum::<f64>()
}
