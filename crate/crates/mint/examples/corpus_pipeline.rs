//! The full corpus pipeline as a library call: line-delimited records in,
//! score CSV out, tradeoff report out.
//!
//! Run: `cargo run --example corpus_pipeline`

use mint::cli::{
    cmd_score, cmd_tradeoff, join_scores_with_factuality, read_score_csv, ScoreOptions,
    TradeoffOptions,
};
use mint::read_jsonl;

fn main() {
    let records_jsonl = r#"{"id":"r1","source":"the harbor bridge will close for repairs next month , the agency said","summary":"the harbor bridge will close for repairs next month","factuality":96.0}
{"id":"r2","source":"the harbor bridge will close for repairs next month , the agency said","summary":"officials plan to shut a major crossing for maintenance work","factuality":78.0}
{"id":"r3","source":["wind farms supplied a third of demand in march","regulators expect the share to grow this year"],"summary":"wind power covered a third of march demand and should keep growing","factuality":88.0}
"#;

    let records = read_jsonl(records_jsonl.as_bytes()).unwrap();

    let mut score_csv = Vec::new();
    cmd_score(&records, &ScoreOptions::default(), &mut score_csv).unwrap();
    println!("--- score report ---");
    print!("{}", String::from_utf8_lossy(&score_csv));

    // Join the per-record mint column with the factuality column and fit a
    // trend line over the resulting points.
    let scores = read_score_csv(score_csv.as_slice()).unwrap();
    let factuality: Vec<(String, f64)> = records
        .iter()
        .map(|r| (r.id.clone(), r.factuality.unwrap()))
        .collect();
    let series = join_scores_with_factuality("demo", &scores, &factuality).unwrap();

    let mut tradeoff_csv = Vec::new();
    let mut svg = Vec::new();
    cmd_tradeoff(
        &series,
        &TradeoffOptions::default(),
        &mut tradeoff_csv,
        Some(&mut svg),
    )
    .unwrap();
    println!();
    println!("--- tradeoff report ---");
    print!("{}", String::from_utf8_lossy(&tradeoff_csv));
    println!();
    println!("scatter plot: {} bytes of svg", svg.len());
}
