//! Tokenization, n-gram matching, longest common subsequence, and greedy
//! extractive-fragment decomposition.
//!
//! Everything in this module is boundary-aware: a source built from several
//! documents records where each new document starts, and no n-gram, fragment,
//! or common subsequence is allowed to span two documents.

use std::collections::{HashMap, HashSet};

use unicode_segmentation::UnicodeSegmentation;

/// A normalized token sequence for a source (possibly multi-document) or a
/// summary.
///
/// `doc_boundaries` holds the indices where a new document begins; it is
/// empty for single-document sources and for summaries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSeq {
    tokens: Vec<String>,
    doc_boundaries: Vec<usize>,
}

impl TokenSeq {
    /// Build a single-document sequence.
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty()), "empty token");
        Self {
            tokens,
            doc_boundaries: Vec::new(),
        }
    }

    /// Build a multi-document sequence by concatenation, recording where each
    /// new document starts. Empty documents are skipped.
    pub fn from_docs(docs: Vec<Vec<String>>) -> Self {
        let mut tokens = Vec::new();
        let mut doc_boundaries = Vec::new();
        for doc in docs {
            if doc.is_empty() {
                continue;
            }
            if !tokens.is_empty() {
                doc_boundaries.push(tokens.len());
            }
            debug_assert!(doc.iter().all(|t| !t.is_empty()), "empty token");
            tokens.extend(doc);
        }
        Self {
            tokens,
            doc_boundaries,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn doc_boundaries(&self) -> &[usize] {
        &self.doc_boundaries
    }

    /// True if index `i` is the first token of a new document (index 0 is
    /// the start of the first document, not a recorded boundary).
    pub fn starts_new_doc(&self, i: usize) -> bool {
        self.doc_boundaries.binary_search(&i).is_ok()
    }

    /// True if the span `[start, start + len)` would straddle two documents.
    pub fn span_crosses_boundary(&self, start: usize, len: usize) -> bool {
        let lo = self.doc_boundaries.partition_point(|&b| b <= start);
        lo < self.doc_boundaries.len() && self.doc_boundaries[lo] < start + len
    }

    /// Half-open `[start, end)` ranges of the individual documents.
    pub fn doc_ranges(&self) -> Vec<std::ops::Range<usize>> {
        if self.tokens.is_empty() {
            return Vec::new();
        }
        let mut starts = vec![0];
        starts.extend_from_slice(&self.doc_boundaries);
        starts
            .windows(2)
            .map(|w| w[0]..w[1])
            .chain(std::iter::once(
                *starts.last().unwrap()..self.tokens.len(),
            ))
            .collect()
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self::from_tokens(iter.into_iter().map(Into::into).collect())
    }
}

/// Options for [`tokenize`]. Defaults: case folding on, punctuation kept as
/// separate tokens.
#[derive(Debug, Clone)]
pub struct TokenizerOptions {
    pub lowercase: bool,
    pub keep_punctuation: bool,
}

impl Default for TokenizerOptions {
    fn default() -> Self {
        Self {
            lowercase: true,
            keep_punctuation: true,
        }
    }
}

/// Split `text` into word tokens along Unicode word boundaries. Whitespace is
/// discarded; punctuation becomes separate tokens unless dropped via options.
pub fn tokenize(text: &str, opts: &TokenizerOptions) -> TokenSeq {
    TokenSeq::from_tokens(tokenize_words(text, opts))
}

/// Tokenize several documents into one boundary-tracked sequence.
pub fn tokenize_docs<S: AsRef<str>>(docs: &[S], opts: &TokenizerOptions) -> TokenSeq {
    TokenSeq::from_docs(
        docs.iter()
            .map(|d| tokenize_words(d.as_ref(), opts))
            .collect(),
    )
}

fn tokenize_words(text: &str, opts: &TokenizerOptions) -> Vec<String> {
    text.split_word_bounds()
        .filter(|seg| !seg.trim().is_empty())
        .filter(|seg| opts.keep_punctuation || seg.chars().any(char::is_alphanumeric))
        .map(|seg| {
            if opts.lowercase {
                seg.to_lowercase()
            } else {
                seg.to_string()
            }
        })
        .collect()
}

/// Count how many n-grams of `y` also occur (contiguously) in `x`.
///
/// Returns `(matched, total)`. Every occurrence in `y` counts, with
/// multiplicity and without clipping: an n-gram extracted three times counts
/// three times. N-grams crossing a document boundary on either side are
/// excluded.
pub fn matched_ngram_count(x: &TokenSeq, y: &TokenSeq, n: usize) -> (usize, usize) {
    assert!(n >= 1, "n-gram order must be at least 1");
    if y.len() < n {
        return (0, 0);
    }
    let mut source_grams: HashSet<&[String]> = HashSet::new();
    if x.len() >= n {
        for start in 0..=x.len() - n {
            if !x.span_crosses_boundary(start, n) {
                source_grams.insert(&x.tokens()[start..start + n]);
            }
        }
    }
    let mut matched = 0;
    let mut total = 0;
    for start in 0..=y.len() - n {
        if y.span_crosses_boundary(start, n) {
            continue;
        }
        total += 1;
        if source_grams.contains(&y.tokens()[start..start + n]) {
            matched += 1;
        }
    }
    (matched, total)
}

/// Length of the longest common (non-contiguous) token subsequence of `x`
/// and `y`.
///
/// Subsequences may not mix tokens from different documents, so the result
/// is the maximum over per-document pairs. For single-document inputs this
/// is the classic LCS.
pub fn lcs_length(x: &TokenSeq, y: &TokenSeq) -> usize {
    let mut best = 0;
    for xr in x.doc_ranges() {
        for yr in y.doc_ranges() {
            best = best.max(lcs_dp(&x.tokens()[xr.clone()], &y.tokens()[yr]));
        }
    }
    best
}

fn lcs_dp(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            cur[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// A maximal contiguous span of the summary that occurs verbatim in the
/// source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fragment {
    /// Index of the first covered token in the summary.
    pub summary_start: usize,
    /// Number of covered tokens, always at least 1.
    pub length: usize,
}

/// The greedy decomposition of a summary into extractive fragments, ordered
/// by summary position and non-overlapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FragmentSet {
    fragments: Vec<Fragment>,
}

impl FragmentSet {
    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Number of summary tokens covered by some fragment.
    pub fn covered_tokens(&self) -> usize {
        self.fragments.iter().map(|f| f.length).sum()
    }

    /// Sum of squared fragment lengths; the numerator of the density metric.
    pub fn squared_length_sum(&self) -> usize {
        self.fragments.iter().map(|f| f.length * f.length).sum()
    }
}

/// Occurrence index of a source sequence: token to the sorted list of its
/// positions. Supports incremental left-to-right match tracking.
#[derive(Debug, Clone, Default)]
pub struct SourceIndex {
    positions: HashMap<String, Vec<usize>>,
}

impl SourceIndex {
    pub fn build(x: &TokenSeq) -> Self {
        let mut positions: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, t) in x.tokens().iter().enumerate() {
            positions.entry(t.clone()).or_default().push(i);
        }
        Self { positions }
    }

    /// Sorted occurrence positions of `token` in the source; empty if absent.
    pub fn positions(&self, token: &str) -> &[usize] {
        self.positions.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, token: &str) -> bool {
        self.positions.contains_key(token)
    }
}

/// Greedily decompose `y` into the longest extractive fragments with respect
/// to `x`.
///
/// Scans `y` left to right; at each uncovered position takes the longest
/// prefix of the remainder that occurs contiguously in `x` (never crossing a
/// document boundary), emits it, and continues after it. Positions with no
/// match are skipped one token at a time.
pub fn greedy_fragments(x: &TokenSeq, y: &TokenSeq) -> FragmentSet {
    let index = SourceIndex::build(x);
    let mut fragments = Vec::new();
    let mut j = 0;
    while j < y.len() {
        let len = longest_match_at(x, &index, y, j);
        if len >= 1 {
            fragments.push(Fragment {
                summary_start: j,
                length: len,
            });
            j += len;
        } else {
            j += 1;
        }
    }
    FragmentSet { fragments }
}

/// Length of the longest prefix of `y[j..]` that occurs contiguously in `x`
/// without crossing a document boundary on either side.
fn longest_match_at(x: &TokenSeq, index: &SourceIndex, y: &TokenSeq, j: usize) -> usize {
    // `ends` holds the source positions where a match of the current length
    // terminates; extending all of them in lockstep finds the longest match.
    let mut ends: Vec<usize> = index.positions(&y.tokens()[j]).to_vec();
    if ends.is_empty() {
        return 0;
    }
    let mut len = 1;
    while j + len < y.len() && !y.starts_new_doc(j + len) {
        let next = &y.tokens()[j + len];
        let extended: Vec<usize> = ends
            .iter()
            .filter_map(|&p| {
                let q = p + 1;
                (q < x.len() && !x.starts_new_doc(q) && x.tokens()[q] == *next).then_some(q)
            })
            .collect();
        if extended.is_empty() {
            break;
        }
        ends = extended;
        len += 1;
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(tokens: &[&str]) -> TokenSeq {
        tokens.iter().copied().collect()
    }

    #[test]
    fn tokenize_empty_input() {
        assert!(tokenize("", &TokenizerOptions::default()).is_empty());
        assert!(tokenize("   \t\n", &TokenizerOptions::default()).is_empty());
    }

    #[test]
    fn tokenize_sentence_with_punctuation() {
        let ts = tokenize("The cat sat.", &TokenizerOptions::default());
        assert_eq!(ts.tokens(), &["the", "cat", "sat", "."]);
    }

    #[test]
    fn tokenize_options() {
        let keep_case = TokenizerOptions {
            lowercase: false,
            ..TokenizerOptions::default()
        };
        assert_eq!(
            tokenize("The cat", &keep_case).tokens(),
            &["The", "cat"]
        );
        let drop_punct = TokenizerOptions {
            keep_punctuation: false,
            ..TokenizerOptions::default()
        };
        assert_eq!(
            tokenize("The cat sat.", &drop_punct).tokens(),
            &["the", "cat", "sat"]
        );
        // Alphanumeric-bearing segments like "3.14" survive punctuation drop.
        assert_eq!(tokenize("pi 3.14!", &drop_punct).tokens(), &["pi", "3.14"]);
    }

    #[test]
    fn tokenize_two_docs_records_boundary() {
        let ts = tokenize_docs(&["doc one", "doc two"], &TokenizerOptions::default());
        assert_eq!(ts.tokens(), &["doc", "one", "doc", "two"]);
        assert_eq!(ts.doc_boundaries(), &[2]);
        assert!(ts.starts_new_doc(2));
        assert!(!ts.starts_new_doc(0));
        assert!(ts.span_crosses_boundary(1, 2));
        assert!(!ts.span_crosses_boundary(2, 2));
    }

    #[test]
    fn tokenize_docs_skips_empty_docs() {
        let ts = tokenize_docs(&["a b", "", "c"], &TokenizerOptions::default());
        assert_eq!(ts.tokens(), &["a", "b", "c"]);
        assert_eq!(ts.doc_boundaries(), &[2]);
    }

    #[test]
    fn tokenize_unicode() {
        let ts = tokenize("Naïve CAFÉ über-cool", &TokenizerOptions::default());
        assert_eq!(ts.tokens(), &["naïve", "café", "über", "-", "cool"]);
    }

    // Brute-force oracle: enumerate all y n-grams and search x by sliding
    // window, both honoring boundaries.
    fn ngram_oracle(x: &TokenSeq, y: &TokenSeq, n: usize) -> (usize, usize) {
        let mut matched = 0;
        let mut total = 0;
        if y.len() < n {
            return (0, 0);
        }
        for j in 0..=y.len() - n {
            if y.span_crosses_boundary(j, n) {
                continue;
            }
            total += 1;
            let gram = &y.tokens()[j..j + n];
            let mut found = false;
            if x.len() >= n {
                for i in 0..=x.len() - n {
                    if !x.span_crosses_boundary(i, n) && &x.tokens()[i..i + n] == gram {
                        found = true;
                        break;
                    }
                }
            }
            if found {
                matched += 1;
            }
        }
        (matched, total)
    }

    #[test]
    fn ngram_counts_basic() {
        let x = seq(&["a", "b", "c", "a", "b"]);
        let y = seq(&["a", "b", "a"]);
        assert_eq!(matched_ngram_count(&x, &y, 2), (1, 2));
        assert_eq!(matched_ngram_count(&x, &y, 2), ngram_oracle(&x, &y, 2));
    }

    #[test]
    fn ngram_counts_multiplicity_without_clipping() {
        let x = seq(&["a"]);
        let y = seq(&["a", "a", "a"]);
        assert_eq!(matched_ngram_count(&x, &y, 1), (3, 3));
    }

    #[test]
    fn ngram_counts_short_summary() {
        let x = seq(&["a", "b", "c"]);
        let y = seq(&["a", "b"]);
        assert_eq!(matched_ngram_count(&x, &y, 3), (0, 0));
    }

    #[test]
    fn ngram_counts_respect_source_boundaries() {
        // "b c" spans the two source documents and must not count as a match.
        let x = TokenSeq::from_docs(vec![
            vec!["a".into(), "b".into()],
            vec!["c".into(), "d".into()],
        ]);
        let y = seq(&["b", "c"]);
        assert_eq!(matched_ngram_count(&x, &y, 2), (0, 1));
        assert_eq!(matched_ngram_count(&x, &y, 2), ngram_oracle(&x, &y, 2));
    }

    #[test]
    fn lcs_hand_cases() {
        assert_eq!(lcs_length(&seq(&["a", "b", "c", "d"]), &seq(&["a", "c", "d"])), 3);
        let x = seq(&["a", "b", "c"]);
        assert_eq!(lcs_length(&x, &x), 3);
        assert_eq!(lcs_length(&seq(&["a", "b"]), &seq(&["c", "d"])), 0);
        assert_eq!(lcs_length(&seq(&[]), &seq(&["a"])), 0);
    }

    #[test]
    fn lcs_does_not_mix_documents() {
        // Subsequence [a, d] would need tokens from both documents.
        let x = TokenSeq::from_docs(vec![
            vec!["a".into(), "b".into()],
            vec!["c".into(), "d".into()],
        ]);
        let y = seq(&["a", "d"]);
        assert_eq!(lcs_length(&x, &y), 1);
    }

    #[test]
    fn greedy_fragments_hand_case() {
        let x = seq(&["the", "quick", "brown", "fox", "jumps"]);
        let y = seq(&["the", "quick", "fox", "jumps"]);
        let fs = greedy_fragments(&x, &y);
        assert_eq!(
            fs.fragments(),
            &[
                Fragment { summary_start: 0, length: 2 },
                Fragment { summary_start: 2, length: 2 },
            ]
        );
    }

    #[test]
    fn greedy_fragments_identity_is_single_fragment() {
        let x = seq(&["a", "b", "c", "d"]);
        let fs = greedy_fragments(&x, &x);
        assert_eq!(fs.fragments(), &[Fragment { summary_start: 0, length: 4 }]);
        assert_eq!(fs.covered_tokens(), 4);
    }

    #[test]
    fn greedy_fragments_disjoint_vocab_is_empty() {
        let x = seq(&["a", "b"]);
        let y = seq(&["c", "d"]);
        assert!(greedy_fragments(&x, &y).is_empty());
    }

    #[test]
    fn greedy_fragments_never_cross_source_boundary() {
        let x = TokenSeq::from_docs(vec![
            vec!["a".into(), "b".into()],
            vec!["b".into(), "c".into()],
        ]);
        // "a b c" exists only across the boundary; greedy must split it.
        let y = seq(&["a", "b", "c"]);
        let fs = greedy_fragments(&x, &y);
        assert_eq!(
            fs.fragments(),
            &[
                Fragment { summary_start: 0, length: 2 },
                Fragment { summary_start: 2, length: 1 },
            ]
        );
    }

    #[test]
    fn fragment_spans_literally_occur_in_source() {
        let x = seq(&["a", "b", "a", "c", "b", "a"]);
        let y = seq(&["b", "a", "c", "z", "a", "b"]);
        let fs = greedy_fragments(&x, &y);
        for f in fs.fragments() {
            let span = &y.tokens()[f.summary_start..f.summary_start + f.length];
            let occurs = (0..=x.len().saturating_sub(f.length)).any(|i| {
                !x.span_crosses_boundary(i, f.length) && &x.tokens()[i..i + f.length] == span
            });
            assert!(occurs, "span {span:?} not found in source");
        }
    }

    #[test]
    fn source_index_positions_sorted() {
        let x = seq(&["a", "b", "a", "a"]);
        let idx = SourceIndex::build(&x);
        assert_eq!(idx.positions("a"), &[0, 2, 3]);
        assert_eq!(idx.positions("b"), &[1]);
        assert_eq!(idx.positions("z"), &[] as &[usize]);
    }
}
