use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;

use super::config::RunConfig;
use super::dataset::Dataset;
use super::folds::{stream_rng, FoldPlan};
use super::prepare::PreparedEssay;
use crate::features::{
    apply_normalization, fit_normalization, FeatureRegistry, FeatureVector, NormalizationStats,
    FEATURE_DIM,
};
use crate::metrics::qwk;
use crate::neural::{
    batch_gradients, clip_global_norm, dropout_mask, init_params, predict, Checkpoint, Example,
    ModelDims, ParamSet, RmsProp, DROPOUT_RATE,
};
use crate::text_prep::{encode_rows, EmbeddingMode, EssayTensor, Vocabulary};
use crate::{Error, Result};

const TRAIN_STREAM: u64 = 2;
const SUBSAMPLE_STREAM: u64 = 3;
/// Essays scored per parallel prediction chunk.
const PREDICT_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub essay_id: String,
    pub gold: i64,
    pub predicted: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub target_prompt: u8,
    /// Mean per-prompt dev QWK after each epoch.
    pub dev_qwk: Vec<f64>,
    /// Mean training loss of each epoch.
    pub train_loss: Vec<f64>,
    /// 1-based epoch of the kept parameters; 0 if no epoch ran.
    pub selected_epoch: usize,
    pub test_qwk: f64,
    pub seconds: f64,
    /// Examples consumed by parameter updates, per prompt.
    pub train_counts: BTreeMap<u8, usize>,
    pub predictions: Vec<Prediction>,
}

impl FoldResult {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &FoldResult) -> bool {
        FoldResult {
            seconds: 0.0,
            ..self.clone()
        } == FoldResult {
            seconds: 0.0,
            ..other.clone()
        }
    }
}

/// Model input of one essay.
struct Encoded {
    rows: Vec<Vec<u32>>,
    features: Vec<f64>,
}

impl Encoded {
    fn tensor(&self, config: &RunConfig) -> EssayTensor {
        EssayTensor::from_rows(&self.rows, config.max_sentences, config.max_tokens)
    }
}

fn encode(
    prepared: &PreparedEssay,
    vocab: &Vocabulary,
    config: &RunConfig,
    features: Vec<f64>,
) -> Encoded {
    let rows = if config.mode.is_some() {
        encode_rows(&prepared.sentences, vocab)
    } else {
        Vec::new()
    };
    Encoded { rows, features }
}

fn normalized_features(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    index: usize,
    stats: &NormalizationStats,
    config: &RunConfig,
) -> Result<Vec<f64>> {
    if !config.features {
        return Ok(Vec::new());
    }
    let v = FeatureVector {
        essay_set: dataset.essays[index].essay_set,
        values: prepared[index].raw_features.clone(),
    };
    Ok(apply_normalization(&v, stats)?.values)
}

/// Source prompts: stats over all their train and dev essays. Target
/// prompt: stats over a seeded `subsample` fraction of its essays only.
pub fn fit_fold_normalization(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    plan: &FoldPlan,
    config: &RunConfig,
) -> NormalizationStats {
    let vector = |i: usize| FeatureVector {
        essay_set: dataset.essays[i].essay_set,
        values: prepared[i].raw_features.clone(),
    };
    let source: Vec<FeatureVector> = plan
        .train
        .iter()
        .chain(&plan.dev)
        .map(|i| vector(*i))
        .collect();
    let mut stats = fit_normalization(&source);
    let mut visible = plan.test.clone();
    let mut rng = stream_rng(config.seed, SUBSAMPLE_STREAM, plan.target_prompt);
    visible.shuffle(&mut rng);
    let k =
        ((visible.len() as f64 * config.subsample).ceil() as usize).clamp(1, visible.len().max(1));
    visible.truncate(k);
    let target: Vec<FeatureVector> = visible.into_iter().map(vector).collect();
    stats.merge(fit_normalization(&target));
    stats
}

fn unit_predictions(params: &ParamSet, inputs: &[Encoded], config: &RunConfig) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(inputs.len());
    for chunk in inputs.chunks(PREDICT_CHUNK) {
        let tensors: Vec<EssayTensor> = chunk.iter().map(|e| e.tensor(config)).collect();
        let pairs: Vec<(&EssayTensor, &[f64])> = tensors
            .iter()
            .zip(chunk)
            .map(|(t, e)| (t, e.features.as_slice()))
            .collect();
        out.extend(predict(params, &pairs)?);
    }
    Ok(out)
}

/// Rounds predictions onto each essay's score grid and averages QWK over prompts.
fn score(dataset: &Dataset, indices: &[usize], unit: &[f64]) -> Result<(f64, Vec<Prediction>)> {
    let mut by_prompt: BTreeMap<u8, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    let mut predictions = Vec::with_capacity(indices.len());
    for (i, y) in indices.iter().zip(unit) {
        let essay = &dataset.essays[*i];
        let meta = dataset.meta(essay.essay_set)?;
        let predicted = meta.rescale_from_unit(*y);
        let entry = by_prompt.entry(essay.essay_set).or_default();
        entry.0.push(essay.score);
        entry.1.push(predicted);
        predictions.push(Prediction {
            essay_id: essay.essay_id.clone(),
            gold: essay.score,
            predicted,
        });
    }
    if by_prompt.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut total = 0.0;
    for (p, (gold, pred)) in &by_prompt {
        total += qwk(gold, pred, &dataset.meta(*p)?)?;
    }
    Ok((total / by_prompt.len() as f64, predictions))
}

/// Scores `indices` with a checkpoint's parameters, vocabulary and stats.
pub fn evaluate_checkpoint(
    checkpoint: &Checkpoint,
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    indices: &[usize],
) -> Result<(f64, Vec<Prediction>)> {
    let mut config = RunConfig::default();
    config.apply_text(&checkpoint.config)?;
    if config.features && checkpoint.registry_sha256 != FeatureRegistry::reference().sha256() {
        return Err(Error::Checkpoint(
            "feature registry differs from this build".into(),
        ));
    }
    let mut stats = checkpoint.normalization.clone();
    let missing: Vec<u8> = indices
        .iter()
        .map(|i| dataset.essays[*i].essay_set)
        .filter(|s| stats.get(*s).is_none())
        .collect();
    if config.features && !missing.is_empty() {
        log::warn!("no stored normalization for sets {missing:?}; fitting on the essays given");
        let fresh: Vec<FeatureVector> = indices
            .iter()
            .filter(|i| missing.contains(&dataset.essays[**i].essay_set))
            .map(|i| FeatureVector {
                essay_set: dataset.essays[*i].essay_set,
                values: prepared[*i].raw_features.clone(),
            })
            .collect();
        stats.merge(fit_normalization(&fresh));
    }
    let inputs = indices
        .iter()
        .map(|i| {
            let f = normalized_features(dataset, prepared, *i, &stats, &config)?;
            Ok(encode(&prepared[*i], &checkpoint.vocab, &config, f))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = unit_predictions(&checkpoint.params, &inputs, &config)?;
    score(dataset, indices, &unit)
}

/// Trains on the plan's source prompts, selects the epoch with the best dev
/// QWK, then scores the held-out prompt once.
pub fn train_fold(
    dataset: &Dataset,
    prepared: &[PreparedEssay],
    plan: &FoldPlan,
    config: &RunConfig,
) -> Result<(Checkpoint, FoldResult)> {
    config.validate()?;
    if plan.train.is_empty() {
        return Err(Error::Dataset(format!(
            "fold {}: empty training set",
            plan.target_prompt
        )));
    }
    let start = Instant::now();
    let target = plan.target_prompt;
    let config = RunConfig {
        target_prompt: Some(target),
        ..config.clone()
    };

    let vocab = match config.mode {
        Some(EmbeddingMode::Word) => {
            Vocabulary::words(plan.train.iter().flat_map(|i| &prepared[*i].sentences), 2)
        }
        _ => Vocabulary::tags(),
    };
    let stats = if config.features {
        fit_fold_normalization(dataset, prepared, plan, &config)
    } else {
        NormalizationStats::default()
    };
    let encode_all = |idx: &[usize]| -> Result<Vec<Encoded>> {
        idx.iter()
            .map(|i| {
                let f = normalized_features(dataset, prepared, *i, &stats, &config)?;
                Ok(encode(&prepared[*i], &vocab, &config, f))
            })
            .collect()
    };
    let train_inputs = encode_all(&plan.train)?;
    let dev_inputs = encode_all(&plan.dev)?;
    let targets: Vec<f64> = plan
        .train
        .iter()
        .map(|i| {
            let e = &dataset.essays[*i];
            dataset.meta(e.essay_set)?.scale_to_unit(e.score)
        })
        .collect::<Result<_>>()?;

    let n_features = if config.features { FEATURE_DIM } else { 0 };
    let dims = match config.mode {
        Some(_) => ModelDims::paes(vocab.len(), n_features),
        None => ModelDims::features_only(n_features),
    };
    let mut params = init_params(dims, config.seed);
    let mut optimizer = RmsProp::new(&params);
    let mut best = (params.clone(), optimizer.clone(), 0usize, f64::NEG_INFINITY);
    let mut rng = stream_rng(config.seed, TRAIN_STREAM, target);
    let mut dev_qwk = Vec::new();
    let mut train_loss = Vec::new();
    let mut train_counts: BTreeMap<u8, usize> = BTreeMap::new();
    let use_dropout = config.dropout && dims.encoder;

    let mut order: Vec<usize> = (0..plan.train.len()).collect();
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for (b, chunk) in order.chunks(config.batch).enumerate() {
            let tensors: Vec<EssayTensor> = chunk
                .iter()
                .map(|k| train_inputs[*k].tensor(&config))
                .collect();
            let batch: Vec<Example<'_>> = chunk
                .iter()
                .zip(&tensors)
                .map(|(k, t)| Example {
                    essay: t,
                    features: &train_inputs[*k].features,
                    target: targets[*k],
                })
                .collect();
            let masks: Option<Vec<Vec<f64>>> = use_dropout.then(|| {
                chunk
                    .iter()
                    .map(|_| dropout_mask(&mut rng, dims.hidden, DROPOUT_RATE))
                    .collect()
            });
            let (loss, mut grads) = batch_gradients(&params, &batch, masks.as_deref())?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    batch: b,
                    loss,
                });
            }
            if let Some(max) = config.clip_norm {
                clip_global_norm(&mut grads, max);
            }
            optimizer.step(&mut params, &grads)?;
            for k in chunk {
                *train_counts
                    .entry(dataset.essays[plan.train[*k]].essay_set)
                    .or_default() += 1;
            }
            loss_sum += loss * chunk.len() as f64;
        }
        let epoch_loss = loss_sum / plan.train.len() as f64;
        train_loss.push(epoch_loss);

        let dev = if plan.dev.is_empty() {
            -epoch_loss
        } else {
            let unit = unit_predictions(&params, &dev_inputs, &config)?;
            score(dataset, &plan.dev, &unit)?.0
        };
        dev_qwk.push(dev);
        log::info!("prompt {target} epoch {epoch}: train mse {epoch_loss:.5}, dev qwk {dev:.4}");
        if dev > best.3 {
            best = (params.clone(), optimizer.clone(), epoch, dev);
        }
    }

    let (best_params, best_optimizer, selected_epoch, _) = best;
    let checkpoint = Checkpoint {
        config: config.to_text(),
        vocab,
        registry_sha256: FeatureRegistry::reference().sha256(),
        normalization: stats,
        params: best_params,
        optimizer: best_optimizer,
    };
    let (test_qwk, predictions) = evaluate_checkpoint(&checkpoint, dataset, prepared, &plan.test)?;
    log::info!("prompt {target}: selected epoch {selected_epoch}, test qwk {test_qwk:.4}");
    let result = FoldResult {
        target_prompt: target,
        dev_qwk,
        train_loss,
        selected_epoch,
        test_qwk,
        seconds: start.elapsed().as_secs_f64(),
        train_counts,
        predictions,
    };
    Ok((checkpoint, result))
}
