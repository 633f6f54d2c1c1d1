//! Averaged-perceptron part-of-speech tagger.
//!
//! Greedy left-to-right tagging with the feature templates popularized by
//! Honnibal's `textblob-aptagger` and NLTK's `PerceptronTagger`. Weights ship
//! with the crate as a checksummed text file.
//!
//! # Weights file layout
//!
//! ```text
//! paes-tagger 1
//! sha256 <hex digest of every byte after this line>
//! classes <n> <tag> <tag> ...
//! tagdict <n>
//! <word>\t<tag>                      (n lines)
//! weights <n>
//! <feature>\t<tag>=<w> <tag>=<w> ... (n lines)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::tagset::{tags, Tag, NUM_TAGS};
use super::tokenize::is_placeholder;
use crate::{Error, Result};

const MAGIC: &str = "paes-tagger";
const VERSION: u32 = 1;
const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

static BUNDLED_WEIGHTS: &str = include_str!("../../data/tagger.txt");
static BUNDLED: OnceLock<PerceptronTagger> = OnceLock::new();

#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronTagger {
    /// Unambiguous frequent words, tagged without consulting the model.
    tagdict: HashMap<String, Tag>,
    weights: HashMap<String, Vec<(Tag, f64)>>,
}

impl PerceptronTagger {
    /// The tagger compiled into the crate.
    pub fn bundled() -> &'static PerceptronTagger {
        BUNDLED.get_or_init(|| {
            PerceptronTagger::from_text(BUNDLED_WEIGHTS).expect("bundled tagger weights are valid")
        })
    }

    pub fn tag<S: AsRef<str>>(&self, words: &[S]) -> Vec<Tag> {
        let context = build_context(words);
        let mut prev = START[0].to_string();
        let mut prev2 = START[1].to_string();
        let mut out = Vec::with_capacity(words.len());
        for (i, word) in words.iter().enumerate() {
            let word = word.as_ref();
            let tag = if is_placeholder(word) {
                tags::NNP
            } else if let Some(tag) = self.tagdict.get(word) {
                *tag
            } else {
                let feats = features(i, word, &context, &prev, &prev2);
                self.predict(&feats)
            };
            prev2 = std::mem::replace(&mut prev, tag.as_str().to_string());
            out.push(tag);
        }
        out
    }

    fn predict(&self, feats: &[String]) -> Tag {
        let mut scores = [0.0f64; NUM_TAGS];
        for feat in feats {
            if let Some(row) = self.weights.get(feat) {
                for (tag, w) in row {
                    scores[tag.index()] += w;
                }
            }
        }
        argmax(&scores)
    }

    pub fn num_features(&self) -> usize {
        self.weights.len()
    }

    /// Trains a tagger on gold-tagged sentences.
    pub fn train(sentences: &[(Vec<String>, Vec<Tag>)], iterations: usize, seed: u64) -> Self {
        let tagdict = make_tagdict(sentences);
        let mut model = Trainer::default();
        let mut order: Vec<usize> = (0..sentences.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        for iter in 0..iterations {
            let mut correct = 0usize;
            let mut total = 0usize;
            for &idx in &order {
                let (words, gold) = &sentences[idx];
                let context = build_context(words);
                let mut prev = START[0].to_string();
                let mut prev2 = START[1].to_string();
                for (i, word) in words.iter().enumerate() {
                    let guess = match tagdict.get(word.as_str()) {
                        Some(tag) => *tag,
                        None => {
                            let feats = features(i, word, &context, &prev, &prev2);
                            let ids = model.intern(&feats);
                            let guess = model.predict(&ids);
                            model.update(gold[i], guess, &ids);
                            guess
                        }
                    };
                    prev2 = std::mem::replace(&mut prev, guess.as_str().to_string());
                    correct += usize::from(guess == gold[i]);
                    total += 1;
                }
            }
            log::info!(
                "tagger iteration {}: {:.4} training accuracy",
                iter + 1,
                correct as f64 / total.max(1) as f64
            );
            order.shuffle(&mut rng);
        }

        PerceptronTagger {
            tagdict,
            weights: model.averaged(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut body = String::new();
        let classes: Vec<&str> = Tag::all().map(Tag::as_str).collect();
        let _ = writeln!(body, "classes {} {}", classes.len(), classes.join(" "));

        let mut dict: Vec<(&String, &Tag)> = self.tagdict.iter().collect();
        dict.sort();
        let _ = writeln!(body, "tagdict {}", dict.len());
        for (word, tag) in dict {
            let _ = writeln!(body, "{word}\t{tag}");
        }

        let mut feats: Vec<(&String, &Vec<(Tag, f64)>)> = self.weights.iter().collect();
        feats.sort_by(|a, b| a.0.cmp(b.0));
        let _ = writeln!(body, "weights {}", feats.len());
        for (feat, row) in feats {
            body.push_str(feat);
            body.push('\t');
            for (k, (tag, w)) in row.iter().enumerate() {
                if k > 0 {
                    body.push(' ');
                }
                let _ = write!(body, "{tag}={w}");
            }
            body.push('\n');
        }

        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        format!("{MAGIC} {VERSION}\nsha256 {digest}\n{body}")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let what = "tagger weights";
        let (header, rest) = text
            .split_once('\n')
            .ok_or_else(|| Error::parse(what, 1, "missing header"))?;
        if header.trim_end() != format!("{MAGIC} {VERSION}") {
            return Err(Error::parse(what, 1, format!("bad header `{header}`")));
        }
        let (sum_line, body) = rest
            .split_once('\n')
            .ok_or_else(|| Error::parse(what, 2, "missing checksum"))?;
        let expected = sum_line
            .strip_prefix("sha256 ")
            .ok_or_else(|| Error::parse(what, 2, "missing checksum"))?;
        if hex::encode(Sha256::digest(body.as_bytes())) != expected.trim() {
            return Err(Error::Checksum { what: what.into() });
        }

        let mut lines = body.lines().enumerate().map(|(i, l)| (i + 3, l));
        let parse_tag = |no: usize, s: &str| -> Result<Tag> {
            s.parse::<Tag>()
                .map_err(|e| Error::parse(what, no, e.to_string()))
        };
        let count_of = |no: usize, line: &str, name: &str| -> Result<usize> {
            line.strip_prefix(name)
                .and_then(|r| r.split_whitespace().next())
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::parse(what, no, format!("expected `{name} <n>`")))
        };

        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(what, 0, "missing classes"))?;
        if count_of(no, line, "classes")? != NUM_TAGS {
            return Err(Error::parse(what, no, "tagset size mismatch"));
        }

        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(what, 0, "missing tagdict"))?;
        let n_dict = count_of(no, line, "tagdict")?;
        let mut tagdict = HashMap::with_capacity(n_dict);
        for _ in 0..n_dict {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(what, 0, "truncated tagdict"))?;
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(what, no, "expected word<TAB>tag"))?;
            tagdict.insert(word.to_string(), parse_tag(no, tag)?);
        }

        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(what, 0, "missing weights"))?;
        let n_weights = count_of(no, line, "weights")?;
        let mut weights = HashMap::with_capacity(n_weights);
        for _ in 0..n_weights {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(what, 0, "truncated weights"))?;
            let (feat, row) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(what, no, "expected feature<TAB>weights"))?;
            let mut entries = Vec::new();
            for cell in row.split(' ').filter(|c| !c.is_empty()) {
                let (tag, w) = cell
                    .rsplit_once('=')
                    .ok_or_else(|| Error::parse(what, no, "expected tag=weight"))?;
                let w: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(what, no, format!("bad weight `{w}`")))?;
                entries.push((parse_tag(no, tag)?, w));
            }
            weights.insert(feat.to_string(), entries);
        }

        Ok(PerceptronTagger { tagdict, weights })
    }
}

fn argmax(scores: &[f64; NUM_TAGS]) -> Tag {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    Tag::from_index(best).expect("index within tagset")
}

fn normalize(word: &str) -> String {
    if word.contains('-') && !word.starts_with('-') {
        "!HYPHEN".to_string()
    } else if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
        "!YEAR".to_string()
    } else if word.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        "!DIGITS".to_string()
    } else if is_placeholder(word) {
        "!ANON".to_string()
    } else {
        word.to_lowercase()
    }
}

fn build_context<S: AsRef<str>>(words: &[S]) -> Vec<String> {
    START
        .iter()
        .map(|s| s.to_string())
        .chain(words.iter().map(|w| normalize(w.as_ref())))
        .chain(END.iter().map(|s| s.to_string()))
        .collect()
}

fn suffix(word: &str, n: usize) -> &str {
    let start = word.char_indices().rev().nth(n - 1).map_or(0, |(b, _)| b);
    &word[start..]
}

fn features(i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
    let i = i + START.len();
    let first: String = word.chars().take(1).collect();
    vec![
        "bias".to_string(),
        format!("i suffix {}", suffix(word, 3)),
        format!("i pref1 {first}"),
        format!("i-1 tag {prev}"),
        format!("i-2 tag {prev2}"),
        format!("i tag+i-2 tag {prev} {prev2}"),
        format!("i word {}", context[i]),
        format!("i-1 tag+i word {prev} {}", context[i]),
        format!("i-1 word {}", context[i - 1]),
        format!("i-1 suffix {}", suffix(&context[i - 1], 3)),
        format!("i-2 word {}", context[i - 2]),
        format!("i+1 word {}", context[i + 1]),
        format!("i+1 suffix {}", suffix(&context[i + 1], 3)),
        format!("i+2 word {}", context[i + 2]),
    ]
}

fn make_tagdict(sentences: &[(Vec<String>, Vec<Tag>)]) -> HashMap<String, Tag> {
    const FREQ_THRESHOLD: usize = 20;
    const AMBIGUITY_THRESHOLD: f64 = 0.97;

    let mut counts: HashMap<&str, [usize; NUM_TAGS]> = HashMap::new();
    for (words, tags) in sentences {
        for (w, t) in words.iter().zip(tags) {
            counts.entry(w.as_str()).or_insert([0; NUM_TAGS])[t.index()] += 1;
        }
    }
    counts
        .into_iter()
        .filter_map(|(word, row)| {
            let n: usize = row.iter().sum();
            let (best, &mode) = row.iter().enumerate().max_by_key(|(_, c)| **c)?;
            (n >= FREQ_THRESHOLD && mode as f64 / n as f64 >= AMBIGUITY_THRESHOLD).then(|| {
                (
                    word.to_string(),
                    Tag::from_index(best).expect("valid index"),
                )
            })
        })
        .collect()
}

#[derive(Default)]
struct Trainer {
    feature_ids: HashMap<String, u32>,
    names: Vec<String>,
    weights: HashMap<(u32, Tag), f64>,
    totals: HashMap<(u32, Tag), f64>,
    stamps: HashMap<(u32, Tag), u64>,
    by_feature: HashMap<u32, Vec<Tag>>,
    instances: u64,
}

impl Trainer {
    fn intern(&mut self, feats: &[String]) -> Vec<u32> {
        feats
            .iter()
            .map(|f| {
                if let Some(id) = self.feature_ids.get(f) {
                    *id
                } else {
                    let id = self.names.len() as u32;
                    self.names.push(f.clone());
                    self.feature_ids.insert(f.clone(), id);
                    id
                }
            })
            .collect()
    }

    fn predict(&self, ids: &[u32]) -> Tag {
        let mut scores = [0.0f64; NUM_TAGS];
        for id in ids {
            if let Some(classes) = self.by_feature.get(id) {
                for tag in classes {
                    scores[tag.index()] += self.weights[&(*id, *tag)];
                }
            }
        }
        argmax(&scores)
    }

    fn update(&mut self, truth: Tag, guess: Tag, ids: &[u32]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for &id in ids {
            self.bump(id, truth, 1.0);
            self.bump(id, guess, -1.0);
        }
    }

    fn bump(&mut self, id: u32, tag: Tag, delta: f64) {
        let key = (id, tag);
        let weight = self.weights.entry(key).or_insert_with(|| {
            self.by_feature.entry(id).or_default().push(tag);
            0.0
        });
        let stamp = self.stamps.entry(key).or_insert(0);
        *self.totals.entry(key).or_insert(0.0) += (self.instances - *stamp) as f64 * *weight;
        *stamp = self.instances;
        *weight += delta;
    }

    fn averaged(self) -> HashMap<String, Vec<(Tag, f64)>> {
        let mut out: HashMap<String, Vec<(Tag, f64)>> = HashMap::new();
        let n = self.instances.max(1) as f64;
        for (key, weight) in &self.weights {
            let total = self.totals.get(key).copied().unwrap_or(0.0)
                + (self.instances - self.stamps.get(key).copied().unwrap_or(0)) as f64 * weight;
            let averaged = (total / n * 1000.0).round() / 1000.0;
            if averaged != 0.0 {
                out.entry(self.names[key.0 as usize].clone())
                    .or_default()
                    .push((key.1, averaged));
            }
        }
        for row in out.values_mut() {
            row.sort_by_key(|(tag, _)| *tag);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_corpus() -> Vec<(Vec<String>, Vec<Tag>)> {
        let raw = [
            ("the dog ran", "DT NN VBD"),
            ("a cat sat", "DT NN VBD"),
            ("the bird flew away", "DT NN VBD RB"),
            ("dogs run", "NNS VBP"),
            ("the cat ran quickly", "DT NN VBD RB"),
        ];
        raw.iter()
            .map(|(w, t)| {
                (
                    w.split(' ').map(String::from).collect(),
                    t.split(' ').map(|t| t.parse().unwrap()).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn trains_on_toy_corpus_and_round_trips() {
        let corpus = toy_corpus();
        let tagger = PerceptronTagger::train(&corpus, 10, 7);
        for (words, gold) in &corpus {
            assert_eq!(&tagger.tag(words), gold);
        }
        let text = tagger.to_text();
        let back = PerceptronTagger::from_text(&text).unwrap();
        assert_eq!(back, tagger);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn corrupted_weights_fail_checksum() {
        let tagger = PerceptronTagger::train(&toy_corpus(), 2, 1);
        let text = tagger.to_text().replacen("bias", "bies", 1);
        assert!(matches!(
            PerceptronTagger::from_text(&text),
            Err(Error::Checksum { .. })
        ));
    }

    #[test]
    fn bundled_weights_load() {
        let tagger = PerceptronTagger::bundled();
        assert!(tagger.num_features() > 0);
        assert_eq!(tagger.tag(&["@PERSON1"]), vec![tags::NNP]);
    }

    #[test]
    fn suffix_handles_short_and_multibyte_words() {
        assert_eq!(suffix("ab", 3), "ab");
        assert_eq!(suffix("naïve", 3), "ïve");
        assert_eq!(suffix("walking", 3), "ing");
    }
}
