use std::collections::{HashMap, HashSet};

use super::lexicon::Lexicons;
use crate::text_prep::tagset::NUM_TAGS;
use crate::text_prep::TaggedSentence;

pub const LEXICAL_NAMES: [&str; 8] = [
    "unique_words",
    "type_token_ratio",
    "corrected_type_token_ratio",
    "hapax_proportion",
    "stopword_proportion",
    "distinct_bigram_ratio",
    "distinct_trigram_ratio",
    "rare_word_proportion",
];

pub const DIM: usize = LEXICAL_NAMES.len() + NUM_TAGS;

pub fn extract_variation(essay: &[TaggedSentence]) -> [f64; DIM] {
    extract_with(essay, Lexicons::bundled())
}

fn distinct_ratio(sentences: &[Vec<String>], n: usize) -> f64 {
    let mut seen = HashSet::new();
    let mut total = 0usize;
    for words in sentences {
        for gram in words.windows(n) {
            seen.insert(gram);
            total += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        seen.len() as f64 / total as f64
    }
}

pub(crate) fn extract_with(essay: &[TaggedSentence], lex: &Lexicons) -> [f64; DIM] {
    let mut out = [0.0; DIM];
    let sentences: Vec<Vec<String>> = essay
        .iter()
        .map(|s| s.words().map(|t| t.surface.to_lowercase()).collect())
        .collect();
    let words: Vec<&String> = sentences.iter().flatten().collect();

    if !words.is_empty() {
        let w = words.len() as f64;
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for word in &words {
            *counts.entry(word.as_str()).or_default() += 1;
        }
        let unique = counts.len() as f64;
        let hapax = counts.values().filter(|c| **c == 1).count() as f64;
        let stop = words.iter().filter(|x| lex.is_stopword(x)).count() as f64;
        let rare = words
            .iter()
            .filter(|x| !lex.is_stopword(x) && !lex.is_easy(x))
            .count() as f64;
        out[0] = unique;
        out[1] = unique / w;
        out[2] = unique / (2.0 * w).sqrt();
        out[3] = hapax / unique;
        out[4] = stop / w;
        out[5] = distinct_ratio(&sentences, 2);
        out[6] = distinct_ratio(&sentences, 3);
        out[7] = rare / w;
    }

    let total: usize = essay.iter().map(|s| s.tags.len()).sum();
    if total > 0 {
        let mut counts = [0usize; NUM_TAGS];
        for tag in essay.iter().flat_map(|s| &s.tags) {
            counts[tag.index()] += 1;
        }
        for (slot, c) in out[LEXICAL_NAMES.len()..].iter_mut().zip(counts) {
            *slot = c as f64 / total as f64;
        }
    }
    out
}
