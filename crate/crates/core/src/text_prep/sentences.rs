//! Rule-based sentence segmentation.
//!
//! A boundary is placed after a run of `.`, `!` or `?` (plus any closing
//! quotes or brackets) when it is followed by whitespace and then an
//! uppercase letter, an opening quote, or an `@` placeholder. A period that
//! closes one of the guarded abbreviations never ends a sentence.

/// Lowercased abbreviations (without their final period) that never end a
/// sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "vs", "etc", "e.g", "i.e", "u.s",
    "u.k", "a.m", "p.m", "inc", "ltd", "co", "jan", "feb", "mar", "apr", "jun", "jul", "aug",
    "sep", "sept", "oct", "nov", "dec", "gov", "gen", "sen", "rep", "rev", "fig",
];

pub fn is_abbreviation(word: &str) -> bool {
    let lower = word.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn opens_sentence(c: char) -> bool {
    c.is_uppercase() || matches!(c, '"' | '\'' | '@' | '\u{201c}' | '\u{2018}')
}

/// Byte ranges of the sentences in `text`, trimmed of surrounding whitespace.
pub fn sentence_spans(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        let c = chars[i].1;
        if !is_terminal(c) {
            i += 1;
            continue;
        }

        // Word that this punctuation run closes, for the abbreviation guard.
        let word_start = chars[..i]
            .iter()
            .rposition(|(_, ch)| ch.is_whitespace())
            .map_or(0, |p| p + 1);
        let preceding: String = chars[word_start..i].iter().map(|(_, ch)| *ch).collect();
        let preceding = preceding.trim_start_matches(|ch: char| !ch.is_alphanumeric());

        let mut j = i;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |(p, _)| *p);

        let guarded = c == '.' && j == i + 1 && is_abbreviation(preceding);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = !guarded && k > j && k < chars.len() && opens_sentence(chars[k].1);

        if boundary {
            push_trimmed(text, start, end, &mut spans);
            start = end;
        }
        i = j.max(i + 1);
    }
    push_trimmed(text, start, text.len(), &mut spans);
    spans
}

fn push_trimmed(text: &str, start: usize, end: usize, spans: &mut Vec<(usize, usize)>) {
    let slice = &text[start..end];
    let lead = slice.len() - slice.trim_start().len();
    let trimmed = slice.trim();
    if !trimmed.is_empty() {
        spans.push((start + lead, start + lead + trimmed.len()));
    }
}

/// Splits raw essay text into sentences.
pub fn split_sentences(text: &str) -> Vec<&str> {
    sentence_spans(text)
        .into_iter()
        .map(|(s, e)| &text[s..e])
        .collect()
}
