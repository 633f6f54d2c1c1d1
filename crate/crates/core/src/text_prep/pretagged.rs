//! Pre-tagged input: `token<TAB>tag` lines, blank lines between sentences.
//!
//! A line `# essay <id>` (no tab) starts a new essay, so one file can carry
//! a whole corpus. Files without such lines hold a single essay with no id.

use std::fmt::Write as _;

use super::tagset::Tag;
use super::tokenize::Token;
use super::TaggedSentence;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PretaggedEssay {
    pub essay_id: Option<String>,
    pub sentences: Vec<TaggedSentence>,
}

pub fn read_pretagged(text: &str) -> Result<Vec<PretaggedEssay>> {
    let what = "pre-tagged input";
    let mut essays: Vec<PretaggedEssay> = Vec::new();
    let mut current = PretaggedEssay {
        essay_id: None,
        sentences: Vec::new(),
    };
    let mut sentence = TaggedSentence {
        tokens: Vec::new(),
        tags: Vec::new(),
    };
    // Spans index into a virtual text where tokens are joined by single spaces.
    let mut offset = 0usize;

    let flush_sentence = |sentence: &mut TaggedSentence, essay: &mut PretaggedEssay| {
        if !sentence.is_empty() {
            essay.sentences.push(std::mem::replace(
                sentence,
                TaggedSentence {
                    tokens: Vec::new(),
                    tags: Vec::new(),
                },
            ));
        }
    };

    for (no, line) in text.lines().enumerate() {
        let no = no + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush_sentence(&mut sentence, &mut current);
            continue;
        }
        if !line.contains('\t') {
            if let Some(id) = line.strip_prefix("# essay ") {
                flush_sentence(&mut sentence, &mut current);
                if current.essay_id.is_some() || !current.sentences.is_empty() {
                    essays.push(std::mem::replace(
                        &mut current,
                        PretaggedEssay {
                            essay_id: None,
                            sentences: Vec::new(),
                        },
                    ));
                }
                current.essay_id = Some(id.trim().to_string());
                offset = 0;
                continue;
            }
            return Err(Error::parse(what, no, "expected token<TAB>tag"));
        }
        let (token, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(what, no, "expected token<TAB>tag"))?;
        if token.is_empty() {
            return Err(Error::parse(what, no, "empty token"));
        }
        let tag: Tag = tag
            .trim()
            .parse()
            .map_err(|e: super::tagset::UnknownTag| Error::parse(what, no, e.to_string()))?;
        sentence
            .tokens
            .push(Token::new(token, (offset, offset + token.len())));
        sentence.tags.push(tag);
        offset += token.len() + 1;
    }
    flush_sentence(&mut sentence, &mut current);
    if current.essay_id.is_some() || !current.sentences.is_empty() {
        essays.push(current);
    }
    Ok(essays)
}

pub fn write_pretagged(essays: &[PretaggedEssay]) -> String {
    let mut out = String::new();
    for essay in essays {
        if let Some(id) = &essay.essay_id {
            let _ = writeln!(out, "# essay {id}");
        }
        for sentence in &essay.sentences {
            for (tok, tag) in sentence.tokens.iter().zip(&sentence.tags) {
                let _ = writeln!(out, "{}\t{}", tok.surface, tag);
            }
            out.push('\n');
        }
    }
    out
}
