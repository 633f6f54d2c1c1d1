use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::Dataset;
use crate::{Error, Result};

/// Essay indices (into the dataset) for one held-out prompt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub target_prompt: u8,
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

/// Derives an independent RNG stream for `(seed, stream, prompt)`.
pub(crate) fn stream_rng(seed: u64, stream: u64, prompt: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream << 8 | prompt as u64);
    rng
}

const DEV_STREAM: u64 = 1;

/// Holds out `target` for testing; `dev_fraction` of every other prompt's
/// essays (rounded) forms the dev set.
pub fn make_fold(dataset: &Dataset, target: u8, dev_fraction: f64, seed: u64) -> Result<FoldPlan> {
    let prompts = dataset.prompts();
    if !prompts.contains(&target) {
        return Err(Error::Dataset(format!(
            "no essays for target prompt {target}"
        )));
    }
    let mut rng = stream_rng(seed, DEV_STREAM, target);
    let mut train = Vec::new();
    let mut dev = Vec::new();
    for p in prompts.into_iter().filter(|p| *p != target) {
        let mut idx = dataset.indices_of(p);
        idx.shuffle(&mut rng);
        let n_dev = (idx.len() as f64 * dev_fraction).round() as usize;
        let (d, t) = idx.split_at(n_dev.min(idx.len()));
        dev.extend_from_slice(d);
        train.extend_from_slice(t);
    }
    train.sort_unstable();
    dev.sort_unstable();
    Ok(FoldPlan {
        target_prompt: target,
        train,
        dev,
        test: dataset.indices_of(target),
    })
}

/// One plan per prompt present in the dataset.
pub fn make_folds(dataset: &Dataset, dev_fraction: f64, seed: u64) -> Result<Vec<FoldPlan>> {
    dataset
        .prompts()
        .into_iter()
        .map(|p| make_fold(dataset, p, dev_fraction, seed))
        .collect()
}
