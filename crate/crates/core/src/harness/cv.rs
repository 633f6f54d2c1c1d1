use rayon::prelude::*;

use super::config::RunConfig;
use super::dataset::Dataset;
use super::folds::{make_fold, make_folds};
use super::prepare::PreparedEssay;
use super::report::average_qwk;
use super::train::{evaluate_checkpoint, fit_fold_normalization, train_fold, FoldResult};
use crate::neural::Checkpoint;
use crate::Result;

#[derive(Debug, Clone)]
pub struct CrossValidation {
    /// Ordered by target prompt.
    pub folds: Vec<(Checkpoint, FoldResult)>,
}

impl CrossValidation {
    pub fn results(&self) -> Vec<FoldResult> {
        self.folds.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Arithmetic mean of the per-fold test QWKs.
    pub fn average(&self) -> f64 {
        average_qwk(&self.results())
    }
}

/// Trains one fold per prompt present. Folds share nothing and run in parallel.
pub fn run_cross_validation(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    config: &RunConfig,
) -> Result<CrossValidation> {
    config.validate()?;
    let plans = make_folds(dataset, config.dev_fraction, config.seed)?;
    let folds = plans
        .par_iter()
        .map(|plan| train_fold(dataset, prepared, plan, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossValidation { folds })
}

/// Single held-out prompt.
pub fn run_single_fold(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    target: u8,
    config: &RunConfig,
) -> Result<(Checkpoint, FoldResult)> {
    let plan = make_fold(dataset, target, config.dev_fraction, config.seed)?;
    train_fold(dataset, prepared, &plan, config)
}

/// Average test QWK when only `fraction` of each target prompt's essays
/// is available for fitting its feature normalization. Training never sees
/// the target prompt, so the trained checkpoints are reused as they are.
pub fn subsample_curve(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    cv: &CrossValidation,
    config: &RunConfig,
    fractions: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let plans = make_folds(dataset, config.dev_fraction, config.seed)?;
    fractions
        .iter()
        .map(|&fraction| {
            let varied = RunConfig {
                subsample: fraction,
                ..config.clone()
            };
            varied.validate()?;
            let mut total = 0.0;
            for (ckpt, result) in &cv.folds {
                let plan = plans
                    .iter()
                    .find(|p| p.target_prompt == result.target_prompt)
                    .expect("one plan per fold");
                let fitted = fit_fold_normalization(dataset, prepared, plan, &varied);
                let mut ckpt = ckpt.clone();
                if let Some(ranges) = fitted.get(plan.target_prompt) {
                    ckpt.normalization
                        .insert(plan.target_prompt, ranges.to_vec());
                }
                total += evaluate_checkpoint(&ckpt, dataset, prepared, &plan.test)?.0;
            }
            Ok((fraction, total / cv.folds.len() as f64))
        })
        .collect()
}
