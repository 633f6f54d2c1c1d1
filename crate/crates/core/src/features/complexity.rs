//! Clause and nesting statistics from a rule-based clause segmenter.
//!
//! A clause boundary is placed at
//! - a subordinating conjunction (tagged IN, from [`SUBORDINATORS`]),
//! - a wh-word (WDT, WP, WP$, WRB), except a sentence-initial one in a question,
//! - a coordinator (CC) with a finite verb before it in the current clause
//!   and another finite verb after it.
//!
//! A boundary only counts when a verb follows before the next boundary.
//! When a sentence opens with a subordinate marker, the first comma after
//! that clause's verb closes it. A token's nesting depth is 1 plus the
//! number of subordinate markers (not coordinators) before it.

use crate::text_prep::tagset::tags;
use crate::text_prep::TaggedSentence;

pub const NAMES: [&str; 5] = [
    "clauses_per_sentence",
    "mean_clause_length",
    "max_clauses",
    "mean_parse_depth",
    "mean_leaf_depth",
];

pub const SUBORDINATORS: &[&str] = &[
    "after", "although", "as", "because", "before", "if", "once", "since", "so", "than", "that",
    "though", "unless", "until", "whereas", "whether", "while", "till",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Marker {
    Subordinate,
    Coordinate,
}

fn candidate(sentence: &TaggedSentence, i: usize, question: bool) -> Option<Marker> {
    let tag = sentence.tags[i];
    if tag.is_wh() {
        return if i == 0 && question {
            None
        } else {
            Some(Marker::Subordinate)
        };
    }
    if tag == tags::IN
        && SUBORDINATORS.contains(&sentence.tokens[i].surface.to_lowercase().as_str())
    {
        return Some(Marker::Subordinate);
    }
    if tag == tags::CC {
        return Some(Marker::Coordinate);
    }
    None
}

/// Per-sentence clause count and per-token depths.
fn analyse(sentence: &TaggedSentence) -> (usize, Vec<usize>) {
    let n = sentence.len();
    let question = sentence.tokens.last().is_some_and(|t| t.surface == "?");
    let candidates: Vec<Option<Marker>> =
        (0..n).map(|i| candidate(sentence, i, question)).collect();

    let mut accepted: Vec<(usize, Marker)> = Vec::new();
    let mut clause_start = 0usize;
    for i in 0..n {
        let Some(kind) = candidates[i] else { continue };
        let next = (i + 1..n).find(|&j| candidates[j].is_some()).unwrap_or(n);
        let verb_follows = (i + 1..next).any(|j| sentence.tags[j].is_verb());
        if !verb_follows {
            continue;
        }
        if kind == Marker::Coordinate {
            let finite_before = (clause_start..i).any(|j| sentence.tags[j].is_finite_verb());
            let finite_after = (i + 1..next).any(|j| sentence.tags[j].is_finite_verb());
            if !(finite_before && finite_after) {
                continue;
            }
        }
        accepted.push((i, kind));
        clause_start = i;
    }

    let mut clauses = 1 + accepted.iter().filter(|(i, _)| *i > 0).count();
    if let Some(&(0, Marker::Subordinate)) = accepted.first() {
        let end = accepted.get(1).map_or(n, |m| m.0);
        let first_verb = (1..end).find(|&j| sentence.tags[j].is_verb());
        if let Some(v) = first_verb {
            let comma = (v + 1..end).find(|&j| sentence.tags[j] == tags::COMMA);
            let verb_after =
                comma.is_some_and(|c| (c + 1..end).any(|j| sentence.tags[j].is_verb()));
            if verb_after {
                clauses += 1;
            }
        }
    }

    let mut depths = Vec::with_capacity(n);
    let mut open = 0usize;
    let mut markers = accepted.iter().peekable();
    for i in 0..n {
        depths.push(1 + open);
        if let Some(&&(pos, kind)) = markers.peek() {
            if pos == i {
                if kind == Marker::Subordinate {
                    open += 1;
                }
                markers.next();
            }
        }
    }
    (clauses, depths)
}

pub fn extract_complexity(essay: &[TaggedSentence]) -> [f64; 5] {
    let sentences: Vec<&TaggedSentence> = essay.iter().filter(|s| !s.is_empty()).collect();
    if sentences.is_empty() {
        return [0.0; 5];
    }
    let mut clauses = 0usize;
    let mut max_clauses = 0usize;
    let mut tokens = 0usize;
    let mut depth_sum = 0usize;
    let mut max_depth_sum = 0usize;
    for sentence in &sentences {
        let (c, depths) = analyse(sentence);
        clauses += c;
        max_clauses = max_clauses.max(c);
        tokens += depths.len();
        depth_sum += depths.iter().sum::<usize>();
        max_depth_sum += depths.iter().copied().max().unwrap_or(0);
    }
    let s = sentences.len() as f64;
    [
        clauses as f64 / s,
        tokens as f64 / clauses as f64,
        max_clauses as f64,
        max_depth_sum as f64 / s,
        depth_sum as f64 / tokens as f64,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::test_support::tagged;

    #[test]
    fn empty_is_zero() {
        assert_eq!(extract_complexity(&[]), [0.0; 5]);
    }

    #[test]
    fn single_clause() {
        let s = tagged(&[("I", "PRP"), ("ran", "VBD"), (".", ".")]);
        assert_eq!(extract_complexity(&[s]), [1.0, 3.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn subordinate_clause() {
        let s = tagged(&[
            ("I", "PRP"),
            ("ran", "VBD"),
            ("because", "IN"),
            ("I", "PRP"),
            ("was", "VBD"),
            ("late", "JJ"),
            (".", "."),
        ]);
        let f = extract_complexity(&[s]);
        assert_eq!(f[0], 2.0);
        assert_eq!(f[1], 3.5);
        assert_eq!(f[3], 2.0);
        // Depths 1,1,1,2,2,2,2.
        assert!((f[4] - 11.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn fronted_subordinate_clause() {
        let s = tagged(&[
            ("Because", "IN"),
            ("I", "PRP"),
            ("was", "VBD"),
            ("late", "JJ"),
            (",", ","),
            ("I", "PRP"),
            ("ran", "VBD"),
            (".", "."),
        ]);
        assert_eq!(extract_complexity(&[s])[0], 2.0);
    }

    #[test]
    fn coordination_needs_finite_verbs_on_both_sides() {
        let clauses = tagged(&[
            ("I", "PRP"),
            ("ran", "VBD"),
            ("and", "CC"),
            ("she", "PRP"),
            ("walked", "VBD"),
        ]);
        let nouns = tagged(&[
            ("cats", "NNS"),
            ("and", "CC"),
            ("dogs", "NNS"),
            ("run", "VBP"),
        ]);
        assert_eq!(extract_complexity(&[clauses])[0], 2.0);
        assert_eq!(extract_complexity(&[nouns])[0], 1.0);
    }

    #[test]
    fn question_word_is_not_a_boundary() {
        let s = tagged(&[("What", "WP"), ("is", "VBZ"), ("it", "PRP"), ("?", ".")]);
        assert_eq!(extract_complexity(&[s])[0], 1.0);
        let rel = tagged(&[
            ("The", "DT"),
            ("man", "NN"),
            ("who", "WP"),
            ("left", "VBD"),
            ("smiled", "VBD"),
        ]);
        assert_eq!(extract_complexity(&[rel])[0], 2.0);
    }
}
