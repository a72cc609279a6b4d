//! Train the built-in scoring model, save it, and reload it for decoding.
//!
//! Run: `cargo run --example model_persistence`

use mint::nac::ScoringModel;
use mint::text::TokenSeq;
use mint::{tokenize, NgramModel, TokenizerOptions, EOS};

fn main() {
    let opts = TokenizerOptions::default();
    let corpus: Vec<TokenSeq> = [
        "rain is expected across the north on friday",
        "snow is expected across the hills on sunday",
        "rain is likely across the coast on monday",
    ]
    .iter()
    .map(|t| tokenize(t, &opts))
    .collect();

    let model = NgramModel::train(&corpus, 3, 0.1)
        .unwrap()
        .with_copy_alpha(0.4)
        .unwrap();

    let dir = std::env::temp_dir().join("mint_model_example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("weather.model.json");
    model.save(&path).unwrap();
    println!("saved model to {}", path.display());

    let loaded = NgramModel::load(&path).unwrap();
    println!(
        "reloaded: order {}, |vocab| {}, copy weight {}",
        loaded.order(),
        loaded.vocab().len(),
        loaded.copy_alpha()
    );

    let source = tokenize("rain is expected across the coast on friday", &opts);
    let prefix: Vec<String> = ["rain", "is"].map(String::from).to_vec();
    let mut dist = loaded.next_distribution(&source, &prefix);
    dist.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());

    println!();
    println!("top continuations after \"rain is\":");
    for (token, logp) in dist.iter().take(5) {
        let shown = if token == EOS { "<end>" } else { token };
        println!("  {shown:12} p = {:.3}", logp.exp());
    }
}
