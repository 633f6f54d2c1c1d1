//! The 86-dimensional prompt-independent feature vector and its set-wise
//! min-max normalization.
//!
//! Five categories, in registry order: length (11), readability (13),
//! syntactic complexity (5), variation (8 lexical + 45 tag frequencies)
//! and sentiment (4).

mod complexity;
mod length;
pub mod lexicon;
mod readability;
mod sentiment;
mod variation;

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

pub use complexity::{extract_complexity, SUBORDINATORS};
pub use length::extract_length;
pub use lexicon::Lexicons;
pub use readability::{extract_readability, syllables};
pub use sentiment::{extract_sentiment, sentence_polarity};
pub use variation::extract_variation;

use crate::text_prep::{Tag, TaggedSentence};
use crate::{Error, Result};

/// Dimension of the reference registry.
pub const FEATURE_DIM: usize = 86;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub name: &'static str,
    pub features: Vec<String>,
}

/// Ordered, named feature inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRegistry {
    categories: Vec<Category>,
}

fn tag_feature_name(tag: Tag) -> String {
    let stem = match tag.as_str() {
        "#" => "hash".to_string(),
        "$" => "dollar".to_string(),
        "''" => "close_quote".to_string(),
        "``" => "open_quote".to_string(),
        "(" => "open_paren".to_string(),
        ")" => "close_paren".to_string(),
        "," => "comma".to_string(),
        "." => "period".to_string(),
        ":" => "colon".to_string(),
        other => other.to_lowercase().replace('$', "_poss"),
    };
    format!("tag_{stem}")
}

impl FeatureRegistry {
    pub fn reference() -> Self {
        let owned = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut variation = owned(&variation::LEXICAL_NAMES);
        variation.extend(Tag::all().map(tag_feature_name));
        FeatureRegistry {
            categories: vec![
                Category {
                    name: "length",
                    features: owned(&length::NAMES),
                },
                Category {
                    name: "readability",
                    features: owned(&readability::NAMES),
                },
                Category {
                    name: "complexity",
                    features: owned(&complexity::NAMES),
                },
                Category {
                    name: "variation",
                    features: variation,
                },
                Category {
                    name: "sentiment",
                    features: owned(&sentiment::NAMES),
                },
            ],
        }
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn dim(&self) -> usize {
        self.categories.iter().map(|c| c.features.len()).sum()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.categories
            .iter()
            .flat_map(|c| c.features.iter().map(String::as_str))
    }

    /// Hex SHA-256 over the newline-joined feature names.
    pub fn sha256(&self) -> String {
        let joined: Vec<&str> = self.names().collect();
        hex::encode(Sha256::digest(joined.join("\n").as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub essay_set: u8,
    pub values: Vec<f64>,
}

/// Raw feature values in registry order.
pub fn extract(essay: &[TaggedSentence]) -> Vec<f64> {
    let mut values = Vec::with_capacity(FEATURE_DIM);
    values.extend(extract_length(essay));
    values.extend(extract_readability(essay));
    values.extend(extract_complexity(essay));
    values.extend(extract_variation(essay));
    values.extend(extract_sentiment(essay));
    debug_assert_eq!(values.len(), FEATURE_DIM);
    values
}

pub fn assemble(essay_set: u8, essay: &[TaggedSentence]) -> FeatureVector {
    FeatureVector {
        essay_set,
        values: extract(essay),
    }
}

/// Per-set, per-feature `(min, max)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NormalizationStats {
    ranges: BTreeMap<u8, Vec<(f64, f64)>>,
}

impl NormalizationStats {
    pub fn sets(&self) -> impl Iterator<Item = (u8, &[(f64, f64)])> {
        self.ranges.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn get(&self, essay_set: u8) -> Option<&[(f64, f64)]> {
        self.ranges.get(&essay_set).map(Vec::as_slice)
    }

    pub fn insert(&mut self, essay_set: u8, ranges: Vec<(f64, f64)>) {
        self.ranges.insert(essay_set, ranges);
    }

    /// Adds every set of `other`, replacing sets already present.
    pub fn merge(&mut self, other: NormalizationStats) {
        self.ranges.extend(other.ranges);
    }
}

pub fn fit_normalization<'a, I>(vectors: I) -> NormalizationStats
where
    I: IntoIterator<Item = &'a FeatureVector>,
{
    let mut ranges: BTreeMap<u8, Vec<(f64, f64)>> = BTreeMap::new();
    for v in vectors {
        let entry = ranges
            .entry(v.essay_set)
            .or_insert_with(|| vec![(f64::INFINITY, f64::NEG_INFINITY); v.values.len()]);
        for (r, x) in entry.iter_mut().zip(&v.values) {
            r.0 = r.0.min(*x);
            r.1 = r.1.max(*x);
        }
    }
    NormalizationStats { ranges }
}

pub fn apply_normalization(
    vector: &FeatureVector,
    stats: &NormalizationStats,
) -> Result<FeatureVector> {
    let ranges = stats
        .get(vector.essay_set)
        .ok_or(Error::UnknownEssaySet(vector.essay_set))?;
    if ranges.len() != vector.values.len() {
        return Err(Error::LengthMismatch(ranges.len(), vector.values.len()));
    }
    let values = vector
        .values
        .iter()
        .zip(ranges)
        .map(|(x, (lo, hi))| {
            if hi > lo {
                ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    Ok(FeatureVector {
        essay_set: vector.essay_set,
        values,
    })
}
