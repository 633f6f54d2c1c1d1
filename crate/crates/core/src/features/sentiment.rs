use super::lexicon::{Lexicons, NEGATORS};
use crate::text_prep::TaggedSentence;

pub const NAMES: [&str; 4] = [
    "positive_sentence_proportion",
    "negative_sentence_proportion",
    "neutral_sentence_proportion",
    "mean_sentence_polarity",
];

/// Polarity above this is positive, below its negation negative.
pub const THRESHOLD: f64 = 0.05;
/// How many preceding tokens a negator reaches.
const NEGATION_WINDOW: usize = 3;

/// Mean valence of lexicon hits scaled to [-1, 1]; 0 without hits.
pub fn sentence_polarity(sentence: &TaggedSentence, lex: &Lexicons) -> f64 {
    let lowered: Vec<String> = sentence
        .tokens
        .iter()
        .map(|t| t.surface.to_lowercase())
        .collect();
    let mut sum = 0.0;
    let mut hits = 0usize;
    for (i, word) in lowered.iter().enumerate() {
        let Some(&v) = lex.valence.get(word) else {
            continue;
        };
        let negated = lowered[i.saturating_sub(NEGATION_WINDOW)..i]
            .iter()
            .any(|w| NEGATORS.contains(&w.as_str()));
        sum += if negated { -v } else { v };
        hits += 1;
    }
    if hits == 0 {
        0.0
    } else {
        (sum / hits as f64 / 4.0).clamp(-1.0, 1.0)
    }
}

pub fn extract_sentiment(essay: &[TaggedSentence]) -> [f64; 4] {
    extract_with(essay, Lexicons::bundled())
}

pub(crate) fn extract_with(essay: &[TaggedSentence], lex: &Lexicons) -> [f64; 4] {
    let polarities: Vec<f64> = essay
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| sentence_polarity(s, lex))
        .collect();
    if polarities.is_empty() {
        return [0.0; 4];
    }
    let n = polarities.len() as f64;
    let pos = polarities.iter().filter(|p| **p > THRESHOLD).count() as f64;
    let neg = polarities.iter().filter(|p| **p < -THRESHOLD).count() as f64;
    [
        pos / n,
        neg / n,
        (n - pos - neg) / n,
        polarities.iter().sum::<f64>() / n,
    ]
}
