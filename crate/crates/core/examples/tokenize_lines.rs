//! Tokenizes stdin line by line, one sentence per output line with tokens
//! separated by single spaces. Feeds the silver-tagging step that builds the
//! tagger training corpus.

use std::io::{self, BufRead, Write};

use paes_core::text_prep::{split_sentences, tokenize};

fn main() -> io::Result<()> {
    let stdin = io::stdin();
    let mut out = io::BufWriter::new(io::stdout().lock());
    for line in stdin.lock().lines() {
        let line = line?;
        for sentence in split_sentences(&line) {
            let toks: Vec<String> = tokenize(sentence).into_iter().map(|t| t.surface).collect();
            if !toks.is_empty() {
                writeln!(out, "{}", toks.join(" "))?;
            }
        }
    }
    Ok(())
}
