//! Trains the averaged-perceptron tagger from a pre-tagged corpus and writes
//! the weights file.
//!
//! ```text
//! cargo run --release --example train_tagger -- corpus.tsv crates/core/data/tagger.txt [heldout.tsv]
//! ```

use std::env;
use std::fs;

use paes_core::text_prep::{read_pretagged, PerceptronTagger, Tag};

type Corpus = Vec<(Vec<String>, Vec<Tag>)>;

fn load(path: &str) -> Result<Corpus, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path)?;
    Ok(read_pretagged(&text)?
        .into_iter()
        .flat_map(|e| e.sentences)
        .map(|s| (s.tokens.into_iter().map(|t| t.surface).collect(), s.tags))
        .collect())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().collect();
    if args.len() < 3 {
        eprintln!("usage: train_tagger <corpus.tsv> <out.txt> [heldout.tsv]");
        std::process::exit(2);
    }
    let corpus = load(&args[1])?;
    eprintln!("training on {} sentences", corpus.len());
    let tagger = PerceptronTagger::train(&corpus, 5, 20200117);
    fs::write(&args[2], tagger.to_text())?;
    eprintln!("{} features written to {}", tagger.num_features(), args[2]);

    if let Some(heldout) = args.get(3) {
        let heldout = load(heldout)?;
        let (mut hit, mut total) = (0usize, 0usize);
        for (words, gold) in &heldout {
            let guess = tagger.tag(words);
            hit += guess.iter().zip(gold).filter(|(a, b)| a == b).count();
            total += gold.len();
        }
        eprintln!(
            "held-out accuracy {:.4} over {total} tokens",
            hit as f64 / total as f64
        );
    }
    Ok(())
}
