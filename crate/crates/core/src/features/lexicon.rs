//! Bundled word lists: stopwords, easy words and a valence lexicon.
//!
//! Each file starts with `# sha256 <hex>` over the entry lines (everything
//! after the leading `#` comment block).

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const EASY_WORDS: &str = include_str!("../../data/easy_words.txt");
const VALENCE: &str = include_str!("../../data/valence.txt");

/// Tokens that flip the valence of a following sentiment word.
pub const NEGATORS: &[&str] = &[
    "not", "no", "never", "n't", "nothing", "nobody", "none", "nor", "cannot",
];

#[derive(Debug, Clone)]
pub struct Lexicons {
    pub stopwords: HashSet<String>,
    pub easy_words: HashSet<String>,
    pub valence: HashMap<String, f64>,
}

/// Returns the entry lines of a checksummed list, verifying the header.
pub(crate) fn verified_entries<'a>(what: &str, text: &'a str) -> Result<Vec<&'a str>> {
    let first = text.lines().next().unwrap_or("");
    let expected = first
        .strip_prefix("# sha256 ")
        .ok_or_else(|| Error::parse(what, 1, "missing `# sha256` header"))?
        .trim();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') {
            break;
        }
        body_start += line.len();
    }
    let body = &text[body_start..];
    if hex::encode(Sha256::digest(body.as_bytes())) != expected {
        return Err(Error::Checksum {
            what: what.to_string(),
        });
    }
    Ok(body.lines().filter(|l| !l.trim().is_empty()).collect())
}

impl Lexicons {
    pub fn parse(stopwords: &str, easy_words: &str, valence: &str) -> Result<Self> {
        let set = |what: &str, text: &str| -> Result<HashSet<String>> {
            Ok(verified_entries(what, text)?
                .into_iter()
                .map(|l| l.trim().to_string())
                .collect())
        };
        let mut lexicon = HashMap::new();
        let header_lines = valence.lines().take_while(|l| l.starts_with('#')).count();
        for (i, line) in verified_entries("valence lexicon", valence)?
            .into_iter()
            .enumerate()
        {
            let no = header_lines + i + 1;
            let (word, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("valence lexicon", no, "expected word<TAB>value"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| Error::parse("valence lexicon", no, format!("{e}")))?;
            if !(-4.0..=4.0).contains(&value) {
                return Err(Error::parse(
                    "valence lexicon",
                    no,
                    "valence outside [-4, 4]",
                ));
            }
            lexicon.insert(word.to_string(), value);
        }
        Ok(Lexicons {
            stopwords: set("stopword list", stopwords)?,
            easy_words: set("easy-word list", easy_words)?,
            valence: lexicon,
        })
    }

    pub fn bundled() -> &'static Lexicons {
        static CELL: OnceLock<Lexicons> = OnceLock::new();
        CELL.get_or_init(|| {
            Lexicons::parse(STOPWORDS, EASY_WORDS, VALENCE).expect("bundled word lists are valid")
        })
    }

    pub fn is_stopword(&self, lower: &str) -> bool {
        self.stopwords.contains(lower)
    }

    pub fn is_easy(&self, lower: &str) -> bool {
        self.easy_words.contains(lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lists_load() {
        let lex = Lexicons::bundled();
        assert!((160..=180).contains(&lex.stopwords.len()));
        assert!(lex.is_stopword("the"));
        assert_eq!(lex.easy_words.len(), 3000);
        assert!(lex.is_easy("house"));
        assert!(lex.valence["good"] > 0.0);
        assert!(lex.valence["terrible"] < 0.0);
        assert!(!lex.valence.contains_key("not"));
    }

    #[test]
    fn tampered_list_is_rejected() {
        let tampered = STOPWORDS.replacen("\nthe\n", "\nthee\n", 1);
        assert!(matches!(
            Lexicons::parse(&tampered, EASY_WORDS, VALENCE),
            Err(Error::Checksum { .. })
        ));
    }
}
