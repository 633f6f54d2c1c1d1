//! The closed Penn Treebank tagset.

use std::fmt;
use std::str::FromStr;

/// The 45 Penn Treebank tags in frozen order. The order fixes embedding
/// rows and the tag-frequency block of the feature vector.
pub const TAGS: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", "''", "``", "(", ")", ",", ".", ":",
];

pub const NUM_TAGS: usize = TAGS.len();

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(u8);

impl Tag {
    pub fn from_index(index: usize) -> Option<Tag> {
        (index < NUM_TAGS).then_some(Tag(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn as_str(self) -> &'static str {
        TAGS[self.0 as usize]
    }

    pub fn all() -> impl Iterator<Item = Tag> {
        (0..NUM_TAGS).map(|i| Tag(i as u8))
    }

    pub fn is_verb(self) -> bool {
        self.as_str().starts_with("VB") || self == tags::MD
    }

    /// Finite verb forms: past, present, and modals.
    pub fn is_finite_verb(self) -> bool {
        matches!(self.as_str(), "VBD" | "VBP" | "VBZ" | "MD")
    }

    pub fn is_wh(self) -> bool {
        matches!(self.as_str(), "WDT" | "WP" | "WP$" | "WRB")
    }

    pub fn is_punctuation(self) -> bool {
        matches!(
            self.as_str(),
            "#" | "$" | "''" | "``" | "(" | ")" | "," | "." | ":"
        )
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.as_str())
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown POS tag `{}`", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TAGS.iter()
            .position(|t| *t == s)
            .map(|i| Tag(i as u8))
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// Named constants for the tags the rest of the crate refers to directly.
pub mod tags {
    use super::Tag;

    pub const CC: Tag = Tag(0);
    pub const CD: Tag = Tag(1);
    pub const DT: Tag = Tag(2);
    pub const IN: Tag = Tag(5);
    pub const JJ: Tag = Tag(6);
    pub const MD: Tag = Tag(10);
    pub const NN: Tag = Tag(11);
    pub const NNS: Tag = Tag(12);
    pub const NNP: Tag = Tag(13);
    pub const PRP: Tag = Tag(17);
    pub const RB: Tag = Tag(19);
    pub const SYM: Tag = Tag(23);
    pub const VB: Tag = Tag(26);
    pub const VBD: Tag = Tag(27);
    pub const VBP: Tag = Tag(30);
    pub const VBZ: Tag = Tag(31);
    pub const WDT: Tag = Tag(32);
    pub const WP: Tag = Tag(33);
    pub const WRB: Tag = Tag(35);
    pub const COMMA: Tag = Tag(42);
    pub const PERIOD: Tag = Tag(43);
    pub const COLON: Tag = Tag(44);
}
