//! Index spaces for the embedding layer and the padded essay grid.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::tagset::Tag;
use super::TaggedSentence;
use crate::{Error, Result};

pub const PAD: u32 = 0;
pub const UNK: u32 = 1;
const PAD_ENTRY: &str = "<pad>";
const UNK_ENTRY: &str = "<unk>";

/// Sentences kept per essay.
pub const MAX_SENTENCES: usize = 100;
/// Tokens kept per sentence.
pub const MAX_TOKENS: usize = 50;

/// What the embedding rows stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingMode {
    /// One row per Penn Treebank tag.
    Pos,
    /// One row per training-set word seen at least twice.
    Word,
}

impl fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingMode::Pos => "pos",
            EmbeddingMode::Word => "word",
        })
    }
}

impl FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(EmbeddingMode::Pos),
            "word" => Ok(EmbeddingMode::Word),
            other => Err(Error::Config(format!("unknown embedding mode `{other}`"))),
        }
    }
}

/// Dense `entry -> index` map with PAD at 0 and UNK at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    mode: EmbeddingMode,
    entries: Vec<String>,
    index: HashMap<String, u32>,
}

/// The vocabulary over POS tags.
pub type TagVocabulary = Vocabulary;

impl Vocabulary {
    fn from_entries(mode: EmbeddingMode, real: impl IntoIterator<Item = String>) -> Self {
        let entries: Vec<String> = [PAD_ENTRY.to_string(), UNK_ENTRY.to_string()]
            .into_iter()
            .chain(real)
            .collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        Vocabulary {
            mode,
            entries,
            index,
        }
    }

    /// PAD, UNK and the 45 tags in tagset order.
    pub fn tags() -> Self {
        Self::from_entries(
            EmbeddingMode::Pos,
            Tag::all().map(|t| t.as_str().to_string()),
        )
    }

    /// Lowercased words occurring at least `min_freq` times, ordered by
    /// descending frequency then lexicographically.
    pub fn words<'a, I>(sentences: I, min_freq: usize) -> Self
    where
        I: IntoIterator<Item = &'a TaggedSentence>,
    {
        let mut counts: HashMap<String, usize> = HashMap::new();
        for sentence in sentences {
            for tok in &sentence.tokens {
                *counts.entry(tok.surface.to_lowercase()).or_default() += 1;
            }
        }
        let mut kept: Vec<(String, usize)> =
            counts.into_iter().filter(|(_, c)| *c >= min_freq).collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Self::from_entries(EmbeddingMode::Word, kept.into_iter().map(|(w, _)| w))
    }

    /// Rebuilds a vocabulary from its serialized entry list.
    pub fn from_parts(mode: EmbeddingMode, entries: Vec<String>) -> Result<Self> {
        if entries.len() < 2 || entries[0] != PAD_ENTRY || entries[1] != UNK_ENTRY {
            return Err(Error::Checkpoint(
                "vocabulary must start with <pad>, <unk>".into(),
            ));
        }
        Ok(Self::from_entries(mode, entries.into_iter().skip(2)))
    }

    pub fn mode(&self) -> EmbeddingMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn lookup(&self, entry: &str) -> u32 {
        self.index.get(entry).copied().unwrap_or(UNK)
    }

    fn index_of(&self, sentence: &TaggedSentence, position: usize) -> u32 {
        match self.mode {
            EmbeddingMode::Pos => self.lookup(sentence.tags[position].as_str()),
            EmbeddingMode::Word => self.lookup(&sentence.tokens[position].surface.to_lowercase()),
        }
    }
}

/// Padded `[max_sentences x max_tokens]` grid of vocabulary indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssayTensor {
    pub max_sentences: usize,
    pub max_tokens: usize,
    /// Row-major indices; PAD outside the mask.
    pub indices: Vec<u32>,
    pub mask: Vec<bool>,
    /// Valid tokens in each kept sentence; `len()` is the sentence count T.
    pub sentence_lengths: Vec<usize>,
}

impl EssayTensor {
    pub fn num_sentences(&self) -> usize {
        self.sentence_lengths.len()
    }

    pub fn row(&self, sentence: usize) -> &[u32] {
        let start = sentence * self.max_tokens;
        &self.indices[start..start + self.sentence_lengths[sentence]]
    }

    pub fn index(&self, sentence: usize, token: usize) -> u32 {
        self.indices[sentence * self.max_tokens + token]
    }

    /// Builds a tensor directly from per-sentence index rows.
    pub fn from_rows(rows: &[Vec<u32>], max_sentences: usize, max_tokens: usize) -> Self {
        let mut indices = vec![PAD; max_sentences * max_tokens];
        let mut mask = vec![false; max_sentences * max_tokens];
        let mut sentence_lengths = Vec::new();
        for row in rows.iter().filter(|r| !r.is_empty()).take(max_sentences) {
            let s = sentence_lengths.len();
            let n = row.len().min(max_tokens);
            for (t, idx) in row.iter().take(n).enumerate() {
                indices[s * max_tokens + t] = *idx;
                mask[s * max_tokens + t] = true;
            }
            sentence_lengths.push(n);
        }
        EssayTensor {
            max_sentences,
            max_tokens,
            indices,
            mask,
            sentence_lengths,
        }
    }
}

/// Maps tagged sentences onto the padded index grid, truncating beyond the caps.
pub fn encode_indices(
    sentences: &[TaggedSentence],
    vocab: &Vocabulary,
    max_sentences: usize,
    max_tokens: usize,
) -> EssayTensor {
    EssayTensor::from_rows(&encode_rows(sentences, vocab), max_sentences, max_tokens)
}

/// Unpadded index rows, one per sentence.
pub fn encode_rows(sentences: &[TaggedSentence], vocab: &Vocabulary) -> Vec<Vec<u32>> {
    sentences
        .iter()
        .map(|s| (0..s.tokens.len()).map(|i| vocab.index_of(s, i)).collect())
        .collect()
}
