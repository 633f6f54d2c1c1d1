//! Pins every extractor output on a five-essay fixture. Set
//! `PAES_BLESS=1` to rewrite the golden file after an intended change.

mod common;

use common::golden::{fixture, render, GOLDEN_PATH};
use paes_core::features::{
    apply_normalization, extract, fit_normalization, FeatureRegistry, FeatureVector, FEATURE_DIM,
};
use paes_core::text_prep::analyze;

#[test]
fn extractor_outputs_match_golden_file() {
    let got = render();
    if std::env::var_os("PAES_BLESS").is_some() {
        std::fs::write(GOLDEN_PATH, &got).unwrap();
    }
    let want = std::fs::read_to_string(GOLDEN_PATH).expect("golden file present");
    for (g, w) in got.lines().zip(want.lines()) {
        assert_eq!(g, w);
    }
    assert_eq!(got.lines().count(), want.lines().count());
    assert_eq!(got.lines().count(), FEATURE_DIM + 1);
}

fn value(id: &str, name: &str) -> f64 {
    let registry = FeatureRegistry::reference();
    let k = registry
        .names()
        .position(|n| n == name)
        .unwrap_or_else(|| panic!("no feature {name}"));
    let (_, _, text) = fixture().into_iter().find(|(i, _, _)| i == id).unwrap();
    extract(&analyze(&text))[k]
}

#[test]
fn hand_counted_values() {
    // Word tokens per sentence, counted by hand with clitics split off:
    // 4, 17 ("doctor 's", "did n't"), 3, 1, 10.
    assert_eq!(value("g4", "sentence_count"), 5.0);
    assert_eq!(value("g4", "word_count"), 35.0);
    assert_eq!(value("g4", "max_sentence_length"), 17.0);
    assert_eq!(value("g4", "min_sentence_length"), 1.0);
    assert_eq!(value("g4", "commas_per_sentence"), 0.4);
    assert_eq!(value("g4", "punctuation_per_sentence"), 1.4);
    assert_eq!(value("g4", "unique_punctuation"), 4.0);

    assert_eq!(value("g5", "char_count"), 8.0);
    assert_eq!(value("g5", "word_count"), 1.0);
    assert_eq!(value("g5", "long_word_proportion"), 1.0);
    assert_eq!(value("g5", "syllables_per_word"), 2.0);
    // 206.835 - 1.015 * 1 - 84.6 * 2
    assert!((value("g5", "flesch_reading_ease") - 36.62).abs() < 1e-9);
}

#[test]
fn fixture_normalizes_into_unit_interval() {
    let vectors: Vec<FeatureVector> = fixture()
        .iter()
        .map(|(_, set, t)| FeatureVector {
            essay_set: *set,
            values: extract(&analyze(t)),
        })
        .collect();
    let stats = fit_normalization(&vectors);
    for v in &vectors {
        let n = apply_normalization(v, &stats).unwrap();
        assert!(n.values.iter().all(|x| (0.0..=1.0).contains(x)));
    }
}
