//! Score summaries of graded abstractiveness against one source.
//!
//! Run: `cargo run --example measure_abstractiveness`

use mint::{mint_score, tokenize, TokenizerOptions};

fn main() {
    let opts = TokenizerOptions::default();
    let source = tokenize(
        "The city council approved the updated transit plan on Tuesday after months of debate. \
         The plan adds four rapid bus lines and extends night service to the harbor district. \
         Opponents argued the cost estimates were outdated.",
        &opts,
    );

    let summaries = [
        (
            "verbatim extraction",
            "The city council approved the updated transit plan on Tuesday after months of debate.",
        ),
        (
            "reordered extraction",
            "After months of debate, the updated transit plan was approved by the city council.",
        ),
        (
            "paraphrase",
            "Lawmakers signed off on a long-disputed overhaul of public transport.",
        ),
    ];

    println!("{:22} {:>6} {:>6} {:>6} {:>6} {:>6} {:>7} {:>8}", "summary", "p1", "p4", "lcsr", "chi", "mint", "density", "frags");
    for (label, text) in summaries {
        let summary = tokenize(text, &opts);
        let r = mint_score(&source, &summary).expect("non-empty summary");
        println!(
            "{:22} {:6.3} {:6.3} {:6.3} {:6.3} {:6.3} {:7.2} {:8}",
            label, r.p1, r.p4, r.lcsr, r.chi, r.mint, r.density, r.fragment_count
        );
    }
    println!();
    println!("mint = 1 - harmonic mean of the smoothed n-gram precisions and the LCS ratio;");
    println!("0 means a contiguous in-order extraction, values near 1 mean novel wording.");
}
