//! Word-level tokenization.
//!
//! Words, numbers and `@` placeholders are single tokens; every other
//! non-space character is its own token. Clitics are split Treebank-style:
//! `don't` becomes `do n't`, `it's` becomes `it 's`.

use super::sentences::is_abbreviation;

/// Clitic suffixes (after the apostrophe) that are split off a word.
const CLITICS: &[&str] = &["s", "m", "re", "ve", "ll", "d"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// ASAP anonymization placeholder such as `@PERSON1`.
    pub is_anon_entity: bool,
    /// Byte offsets `[start, end)` into the text the token was read from.
    pub char_span: (usize, usize),
}

impl Token {
    pub fn new(surface: impl Into<String>, char_span: (usize, usize)) -> Self {
        let surface = surface.into();
        let is_anon_entity = is_placeholder(&surface);
        Token {
            surface,
            is_anon_entity,
            char_span,
        }
    }

    /// True when the token contains a letter or digit.
    pub fn is_word(&self) -> bool {
        is_word(&self.surface)
    }
}

pub fn is_word(surface: &str) -> bool {
    surface.chars().any(char::is_alphanumeric)
}

pub fn is_placeholder(surface: &str) -> bool {
    let mut chars = surface.chars();
    chars.next() == Some('@') && {
        let rest = chars.as_str();
        !rest.is_empty() && rest.chars().all(char::is_alphanumeric)
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Tokenizes one sentence. Spans are relative to `sentence`.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    tokenize_at(sentence, 0)
}

/// Tokenizes `text` with spans shifted by `offset`.
pub fn tokenize_at(text: &str, offset: usize) -> Vec<Token> {
    let mut out = Vec::new();
    for (start, chunk) in chunks(text) {
        tokenize_chunk(chunk, offset + start, &mut out);
    }
    out
}

fn chunks(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut pieces = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                pieces.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        pieces.push((s, &text[s..]));
    }
    pieces.into_iter()
}

fn tokenize_chunk(chunk: &str, base: usize, out: &mut Vec<Token>) {
    if let Some(stem) = chunk.strip_suffix('.') {
        if is_abbreviation(stem) {
            out.push(Token::new(chunk, (base, base + chunk.len())));
            return;
        }
    }

    let chars: Vec<(usize, char)> = chunk.char_indices().collect();
    let byte_at = |idx: usize| chars.get(idx).map_or(chunk.len(), |(b, _)| *b);
    let alnum_at = |idx: usize| chars.get(idx).is_some_and(|(_, c)| c.is_alphanumeric());
    let digit_at = |idx: usize| chars.get(idx).is_some_and(|(_, c)| c.is_ascii_digit());

    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;

        if c == '@' && alnum_at(i + 1) {
            let mut j = i + 1;
            while alnum_at(j) {
                j += 1;
            }
            push(chunk, base, byte_at(i), byte_at(j), out);
            i = j;
            continue;
        }

        if c.is_alphanumeric() {
            let mut j = i + 1;
            loop {
                if alnum_at(j) {
                    j += 1;
                    continue;
                }
                let joiner = chars.get(j).map(|(_, ch)| *ch);
                let joins = match joiner {
                    Some('-') => alnum_at(j - 1) && alnum_at(j + 1),
                    Some('.') | Some(',') => digit_at(j - 1) && digit_at(j + 1),
                    Some(a) if is_apostrophe(a) => alnum_at(j - 1) && alnum_at(j + 1),
                    _ => false,
                };
                if joins {
                    j += 1;
                } else {
                    break;
                }
            }
            push_word(chunk, base, byte_at(i), byte_at(j), out);
            i = j;
            continue;
        }

        if is_apostrophe(c) && alnum_at(i + 1) {
            // Leading clitic such as a detached `'s`.
            let mut j = i + 1;
            while alnum_at(j) {
                j += 1;
            }
            let rest = chunk[byte_at(i + 1)..byte_at(j)].to_lowercase();
            if CLITICS.contains(&rest.as_str()) {
                push(chunk, base, byte_at(i), byte_at(j), out);
                i = j;
                continue;
            }
        }

        push(chunk, base, byte_at(i), byte_at(i + 1), out);
        i += 1;
    }
}

fn push(chunk: &str, base: usize, start: usize, end: usize, out: &mut Vec<Token>) {
    out.push(Token::new(&chunk[start..end], (base + start, base + end)));
}

fn push_word(chunk: &str, base: usize, start: usize, end: usize, out: &mut Vec<Token>) {
    let word = &chunk[start..end];
    let lower = word.to_lowercase();

    if lower.ends_with("n't") || lower.ends_with("n\u{2019}t") {
        let cut = word
            .char_indices()
            .rev()
            .nth(2)
            .map(|(b, _)| b)
            .expect("word ends with a three-character clitic");
        if cut > 0 {
            push_word(chunk, base, start, start + cut, out);
        }
        push(chunk, base, start + cut, end, out);
        return;
    }

    if let Some((apos, _)) = word.char_indices().rev().find(|(_, c)| is_apostrophe(*c)) {
        let suffix = word[apos..]
            .chars()
            .skip(1)
            .collect::<String>()
            .to_lowercase();
        if apos > 0 && CLITICS.contains(&suffix.as_str()) {
            push_word(chunk, base, start, start + apos, out);
            push(chunk, base, start + apos, end, out);
            return;
        }
    }

    push(chunk, base, start, end, out);
}
