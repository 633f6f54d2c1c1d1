#![allow(dead_code)]

pub mod golden;
pub mod oracles;

use paes_core::harness::{Dataset, Essay};
use paes_core::metrics::prompt_meta;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const OPENERS: [&str; 6] = [
    "I think",
    "Many people believe",
    "In my opinion",
    "The author",
    "Some students",
    "We",
];
const VERBS: [&str; 6] = [
    "argue", "explain", "describe", "remember", "consider", "show",
];
const OBJECTS: [&str; 8] = [
    "the library",
    "a difficult choice",
    "their computers",
    "the cyclist on the road",
    "a patient friend",
    "the garden in spring",
    "every small detail",
    "the long journey home",
];
const TAILS: [&str; 5] = [
    "",
    " because it matters to everyone",
    " although nobody agreed at first",
    " and the results were surprising",
    " when the weather finally changed",
];

/// Essay whose quality grows with `level` in [0, 1]: more and longer sentences.
pub fn synthetic_text(rng: &mut ChaCha8Rng, level: f64) -> String {
    let n = 2 + (level * 10.0).round() as usize;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut s = format!(
            "{} {} {}",
            OPENERS[rng.random_range(0..OPENERS.len())],
            VERBS[rng.random_range(0..VERBS.len())],
            OBJECTS[rng.random_range(0..OBJECTS.len())]
        );
        if rng.random_bool(level.clamp(0.05, 0.95)) {
            s.push_str(TAILS[rng.random_range(1..TAILS.len())]);
        }
        s.push('.');
        out.push(s);
    }
    out.join(" ")
}

/// `per_set` essays for each listed prompt, scores spread over the full range.
pub fn synthetic_dataset(sets: &[u8], per_set: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut essays = Vec::new();
    for &set in sets {
        let meta = prompt_meta(set).unwrap();
        for i in 0..per_set {
            let level = if per_set > 1 {
                i as f64 / (per_set - 1) as f64
            } else {
                0.5
            };
            let score = meta.rescale_from_unit(level);
            essays.push(Essay {
                essay_id: format!("{set}-{i}"),
                essay_set: set,
                text: synthetic_text(&mut rng, level),
                score,
            });
        }
    }
    Dataset::new(essays).unwrap()
}
