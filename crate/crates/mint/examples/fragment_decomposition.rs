//! Decompose a summary into its maximal extractive fragments.
//!
//! Run: `cargo run --example fragment_decomposition`

use mint::{greedy_fragments, mint_score, tokenize_docs, tokenize, TokenizerOptions};

fn main() {
    let opts = TokenizerOptions::default();
    // A two-document source; fragments never span the document boundary.
    let source = tokenize_docs(
        &[
            "Storm damage closed the coastal highway for most of the weekend.",
            "Repair crews reopened the coastal highway late on Sunday, the county said.",
        ],
        &opts,
    );
    let summary = tokenize(
        "The coastal highway was closed by storm damage and reopened late on Sunday.",
        &opts,
    );

    let fragments = greedy_fragments(&source, &summary);
    println!("summary tokens: {}", summary.tokens().join(" "));
    println!();
    for f in fragments.fragments() {
        let span = &summary.tokens()[f.summary_start..f.summary_start + f.length];
        println!(
            "  fragment at {:2}, length {:2}: \"{}\"",
            f.summary_start,
            f.length,
            span.join(" ")
        );
    }
    let uncovered = summary.len() - fragments.covered_tokens();
    println!();
    println!(
        "{} fragments cover {}/{} tokens ({} novel)",
        fragments.len(),
        fragments.covered_tokens(),
        summary.len(),
        uncovered
    );

    let report = mint_score(&source, &summary).unwrap();
    println!(
        "density = sum of squared fragment lengths / summary length = {:.2}",
        report.density
    );
    println!("mint = {:.3}", report.mint);
}
