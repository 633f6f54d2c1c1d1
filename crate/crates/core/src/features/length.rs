use std::collections::BTreeSet;

use crate::text_prep::TaggedSentence;

pub const NAMES: [&str; 11] = [
    "char_count",
    "word_count",
    "sentence_count",
    "mean_word_length",
    "mean_sentence_length",
    "max_sentence_length",
    "min_sentence_length",
    "long_word_proportion",
    "commas_per_sentence",
    "punctuation_per_sentence",
    "unique_punctuation",
];

/// Words of at least this many characters count as long.
const LONG_WORD: usize = 7;

pub fn extract_length(essay: &[TaggedSentence]) -> [f64; 11] {
    let sentences: Vec<&TaggedSentence> = essay.iter().filter(|s| !s.is_empty()).collect();
    if sentences.is_empty() {
        return [0.0; 11];
    }
    let mut chars = 0usize;
    let mut word_chars = 0usize;
    let mut words = 0usize;
    let mut long_words = 0usize;
    let mut commas = 0usize;
    let mut punctuation = 0usize;
    let mut marks = BTreeSet::new();
    let mut lengths = Vec::with_capacity(sentences.len());

    for sentence in &sentences {
        let mut n = 0usize;
        for tok in &sentence.tokens {
            let len = tok.surface.chars().count();
            chars += len;
            if tok.is_word() {
                n += 1;
                word_chars += len;
                if len >= LONG_WORD {
                    long_words += 1;
                }
            } else {
                punctuation += 1;
                if tok.surface == "," {
                    commas += 1;
                }
                marks.insert(tok.surface.as_str());
            }
        }
        words += n;
        lengths.push(n);
    }

    let s = sentences.len() as f64;
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    [
        chars as f64,
        words as f64,
        s,
        ratio(word_chars, words),
        words as f64 / s,
        *lengths.iter().max().unwrap() as f64,
        *lengths.iter().min().unwrap() as f64,
        ratio(long_words, words),
        commas as f64 / s,
        punctuation as f64 / s,
        marks.len() as f64,
    ]
}
