//! Raw essay text to sentences, tokens and POS tags.

mod pretagged;
mod sentences;
pub mod tagger;
pub mod tagset;
mod tokenize;
mod vocab;

pub use pretagged::{read_pretagged, write_pretagged, PretaggedEssay};
pub use sentences::{sentence_spans, split_sentences, ABBREVIATIONS};
pub use tagger::PerceptronTagger;
pub use tagset::{Tag, NUM_TAGS, TAGS};
pub use tokenize::{is_placeholder, is_word, tokenize, tokenize_at, Token};
pub use vocab::{
    encode_indices, encode_rows, EmbeddingMode, EssayTensor, TagVocabulary, Vocabulary,
    MAX_SENTENCES, MAX_TOKENS, PAD, UNK,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<Token>,
    pub tags: Vec<Tag>,
}

impl TaggedSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }
}

/// Tags one tokenized sentence with the bundled tagger.
pub fn pos_tag(tokens: Vec<Token>) -> TaggedSentence {
    pos_tag_with(PerceptronTagger::bundled(), tokens)
}

pub fn pos_tag_with(tagger: &PerceptronTagger, tokens: Vec<Token>) -> TaggedSentence {
    let words: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
    let tags = tagger.tag(&words);
    TaggedSentence { tokens, tags }
}

/// Full pipeline: split, tokenize (spans into `text`) and tag.
pub fn analyze(text: &str) -> Vec<TaggedSentence> {
    sentence_spans(text)
        .into_iter()
        .map(|(s, e)| tokenize_at(&text[s..e], s))
        .filter(|toks| !toks.is_empty())
        .map(pos_tag)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tag_strs(words: &[&str]) -> Vec<&'static str> {
        let toks = words.iter().map(|w| Token::new(*w, (0, w.len()))).collect();
        pos_tag(toks).tags.into_iter().map(Tag::as_str).collect()
    }

    #[test]
    fn placeholder_is_proper_noun() {
        assert_eq!(tag_strs(&["@PERSON1"]), vec!["NNP"]);
    }

    #[test]
    fn determiner_noun() {
        assert_eq!(tag_strs(&["the", "dog"]), vec!["DT", "NN"]);
    }

    #[test]
    fn pronoun_verb_noun_verb_adjective() {
        let tags = tag_strs(&["I", "think", "computers", "are", "necessary"]);
        assert_eq!(tags[0], "PRP");
        assert!(tags[1].starts_with("VB"));
        assert!(tags[2].starts_with("NN"));
        assert!(tags[3].starts_with("VB"));
        assert!(tags[4].starts_with("JJ"));

        let tags = tag_strs(&["I", "believe", "censorship", "is", "useful"]);
        assert_eq!(tags[0], "PRP");
        assert!(tags[1].starts_with("VB"));
        assert!(tags[2].starts_with("NN"));
        assert!(tags[3].starts_with("VB"));
        assert!(tags[4].starts_with("JJ"));
    }

    #[test]
    fn analyze_offsets_into_raw_text() {
        let text = "Dr. Smith said so.  Really, @PERSON1!";
        let sents = analyze(text);
        assert_eq!(sents.len(), 2);
        for s in &sents {
            assert_eq!(s.tokens.len(), s.tags.len());
            for t in &s.tokens {
                assert_eq!(&text[t.char_span.0..t.char_span.1], t.surface);
            }
        }
        assert_eq!(sents[1].tokens[2].surface, "@PERSON1");
        assert_eq!(sents[1].tags[2].as_str(), "NNP");
    }

    #[test]
    fn deterministic_across_calls() {
        let text = "I think computers are necessary. They help us learn.";
        assert_eq!(analyze(text), analyze(text));
    }

    proptest! {
        #[test]
        fn one_tag_per_token(s in "[ -~]{1,80}") {
            let toks = tokenize(&s);
            let n = toks.len();
            let tagged = pos_tag(toks);
            prop_assert_eq!(tagged.tags.len(), n);
        }
    }
}
