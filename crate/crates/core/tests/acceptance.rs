//! Acceptance suite. Runs every criterion, prints one PASS/FAIL/SKIP line
//! each, and exits non-zero if any criterion fails.
//!
//! Criterion 9 needs the public ASAP training file in `ASAP_TSV`.
//! Criterion 10 additionally needs `PAES_FULL=1` and takes hours.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::golden::{render, GOLDEN_PATH};
use common::oracles::{forward_reference, gradient_check};
use common::synthetic_dataset;
use paes_core::features::{
    apply_normalization, extract, fit_normalization, FeatureRegistry, FeatureVector, FEATURE_DIM,
};
use paes_core::harness::{
    dataset_stats, evaluate_checkpoint, load_dataset, make_fold, prepare, run_cross_validation,
    subsample_curve, train_fold, RunConfig,
};
use paes_core::metrics::{qwk_computation, ASAP_PROMPTS};
use paes_core::neural::{
    attention_pool_masked, batch_gradients, init_params, mse, predict, Checkpoint, Example,
    ModelDims, RmsProp,
};
use paes_core::text_prep::{analyze, encode_rows, EssayTensor, Vocabulary, NUM_TAGS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

type Criterion = (&'static str, fn() -> Outcome);

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed < limit
}

/// Direct double summation over the rating grid, written independently of
/// the library's matrix code.
#[allow(clippy::needless_range_loop)]
fn direct_qwk(human: &[i64], pred: &[i64], ratings: usize) -> Option<f64> {
    let n = human.len() as f64;
    let mut hist_h = vec![0.0; ratings];
    let mut hist_p = vec![0.0; ratings];
    for (&a, &b) in human.iter().zip(pred) {
        hist_h[a as usize] += 1.0;
        hist_p[b as usize] += 1.0;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..ratings {
        for j in 0..ratings {
            let w = ((i as f64 - j as f64) / (ratings as f64 - 1.0)).powi(2);
            let o = human
                .iter()
                .zip(pred)
                .filter(|(a, b)| **a == i as i64 && **b == j as i64)
                .count() as f64;
            num += w * o;
            den += w * hist_h[i] * hist_p[j] / n;
        }
    }
    if den == 0.0 {
        (num == 0.0).then_some(1.0)
    } else {
        Some(1.0 - num / den)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let hand = qwk_computation(&[0, 1, 2, 2], &[0, 1, 1, 2], 0, 2).map(|c| c.kappa);
    let mut rng = ChaCha8Rng::seed_from_u64(2019);
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for _ in 0..1000 {
        let ratings = rng.random_range(2..=10usize);
        let n = rng.random_range(1..=50);
        let human: Vec<i64> = (0..n)
            .map(|_| rng.random_range(0..ratings as i64))
            .collect();
        let pred: Vec<i64> = (0..n)
            .map(|_| rng.random_range(0..ratings as i64))
            .collect();
        let lib = qwk_computation(&human, &pred, 0, ratings as i64 - 1)
            .ok()
            .map(|c| c.kappa);
        match (lib, direct_qwk(&human, &pred, ratings)) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            (None, None) => {}
            _ => mismatched += 1,
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst < 1e-9
            && mismatched == 0
            && hand.as_ref().ok() == Some(&0.8)
            && within(Duration::from_secs(5), elapsed),
        format!("max |diff| {worst:e}, {mismatched} mismatched, hand case {hand:?}, {elapsed:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst = (String::new(), 0.0f64);
    for (seed, dropout) in [(1, false), (2, true), (3, false), (4, true)] {
        for (name, err) in gradient_check(seed, dropout) {
            if err > worst.1 {
                worst = (name, err);
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst.1 < 1e-4 && within(Duration::from_secs(30), elapsed),
        format!(
            "worst group {} relative error {:e}, {elapsed:.2?}",
            worst.0, worst.1
        ),
    )
}

fn criterion_3() -> Outcome {
    let gaps = forward_reference();
    let worst = gaps
        .iter()
        .map(|(_, a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    verdict(
        worst <= 1e-12,
        format!("{} quantities, max |diff| {worst:e}", gaps.len()),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_sum = 0.0f64;
    let mut masked_leak = 0.0f64;
    let mut uniform_gap = 0.0f64;
    for case in 0..10_000 {
        let n = rng.random_range(1..=20);
        let dim = rng.random_range(1..=6);
        let equal = case % 10 == 0;
        let row: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let values: Vec<f64> = if equal {
            row.iter().copied().cycle().take(n * dim).collect()
        } else {
            (0..n * dim).map(|_| rng.random_range(-3.0..3.0)).collect()
        };
        let mut mask: Vec<bool> = (0..n).map(|_| rng.random_bool(0.7)).collect();
        mask[rng.random_range(0..n)] = true;
        let w: Vec<f64> = (0..dim * dim)
            .map(|_| rng.random_range(-2.0..2.0))
            .collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
        let (_, weights) = attention_pool_masked(&values, &mask, dim, &w, &b, &u);
        worst_sum = worst_sum.max((weights.iter().sum::<f64>() - 1.0).abs());
        for (wt, m) in weights.iter().zip(&mask) {
            if !m {
                masked_leak = masked_leak.max(wt.abs());
            }
        }
        if equal {
            let live = mask.iter().filter(|m| **m).count() as f64;
            for (wt, m) in weights.iter().zip(&mask) {
                if *m {
                    uniform_gap = uniform_gap.max((wt - 1.0 / live).abs());
                }
            }
        }
    }
    verdict(
        worst_sum <= 1e-6 && masked_leak == 0.0 && uniform_gap <= 1e-6,
        format!(
            "|sum-1| {worst_sum:e}, masked weight {masked_leak:e}, uniform gap {uniform_gap:e}"
        ),
    )
}

fn overfit() -> (usize, f64, Duration) {
    let start = Instant::now();
    let d = synthetic_dataset(&[1], 32, 11);
    let prepared = prepare(&d, None).unwrap();
    let vocab = Vocabulary::tags();
    let raw: Vec<FeatureVector> = prepared
        .iter()
        .map(|p| FeatureVector {
            essay_set: 1,
            values: p.raw_features.clone(),
        })
        .collect();
    let stats = fit_normalization(&raw);
    let feats: Vec<Vec<f64>> = raw
        .iter()
        .map(|v| apply_normalization(v, &stats).unwrap().values)
        .collect();
    let tensors: Vec<EssayTensor> = prepared
        .iter()
        .map(|p| EssayTensor::from_rows(&encode_rows(&p.sentences, &vocab), 100, 50))
        .collect();
    let meta = d.meta(1).unwrap();
    let targets: Vec<f64> = d
        .essays
        .iter()
        .map(|e| meta.scale_to_unit(e.score).unwrap())
        .collect();
    let pairs: Vec<(&EssayTensor, &[f64])> = tensors
        .iter()
        .zip(&feats)
        .map(|(t, f)| (t, f.as_slice()))
        .collect();

    let mut params = init_params(ModelDims::paes(vocab.len(), FEATURE_DIM), 42);
    let mut opt = RmsProp::new(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut order: Vec<usize> = (0..32).collect();
    const EPOCHS: usize = 200;
    for _ in 0..EPOCHS {
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        for chunk in order.chunks(16) {
            let batch: Vec<Example<'_>> = chunk
                .iter()
                .map(|&i| Example {
                    essay: &tensors[i],
                    features: &feats[i],
                    target: targets[i],
                })
                .collect();
            let (_, grads) = batch_gradients(&params, &batch, None).unwrap();
            opt.step(&mut params, &grads).unwrap();
        }
    }
    let final_mse = mse(&targets, &predict(&params, &pairs).unwrap()).unwrap();
    (EPOCHS, final_mse, start.elapsed())
}

fn criterion_5() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let (epochs, loss, elapsed) = pool.install(overfit);
    verdict(
        loss < 0.01 && within(Duration::from_secs(120), elapsed),
        format!("train MSE {loss:.5} after {epochs} epochs on one thread, {elapsed:.1?}"),
    )
}

fn criterion_6() -> Outcome {
    let texts = [
        "I think computers help people. They let us talk to friends who live far away!",
        "The cyclist was tired. Although the road was rough, he kept going until he reached the town.",
        "Laughter",
        "",
        "Was it boring? Yes! But I knew she was scared, so I stayed calm.",
    ];
    let vectors: Vec<FeatureVector> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| FeatureVector {
            essay_set: (i % 2 + 1) as u8,
            values: extract(&analyze(t)),
        })
        .collect();
    let dims_ok = vectors.iter().all(|v| v.values.len() == 86);
    let registry = FeatureRegistry::reference();
    let tag_columns: Vec<usize> = registry
        .names()
        .enumerate()
        .filter(|(_, n)| n.starts_with("tag_"))
        .map(|(k, _)| k)
        .collect();
    let worst_tag_sum = texts
        .iter()
        .zip(&vectors)
        .filter(|(t, _)| !t.trim().is_empty())
        .map(|(_, v)| (tag_columns.iter().map(|k| v.values[*k]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let stats = fit_normalization(&vectors);
    let in_unit = vectors.iter().all(|v| {
        apply_normalization(v, &stats)
            .unwrap()
            .values
            .iter()
            .all(|x| (0.0..=1.0).contains(x))
    });
    let golden_ok = std::fs::read_to_string(GOLDEN_PATH).is_ok_and(|want| want == render());
    verdict(
        dims_ok && tag_columns.len() == NUM_TAGS && worst_tag_sum < 1e-12 && in_unit && golden_ok,
        format!(
            "86 features: {dims_ok}, |tag sum - 1| {worst_tag_sum:e}, normalized in [0,1]: {in_unit}, golden file: {golden_ok}"
        ),
    )
}

fn small_run() -> (RunConfig, paes_core::harness::Dataset) {
    let config = RunConfig {
        epochs: 3,
        batch: 8,
        ..RunConfig::default()
    };
    (config, synthetic_dataset(&[2, 5, 8], 12, 7))
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for meta in ASAP_PROMPTS {
        for score in meta.score_min..=meta.score_max {
            let back = meta.rescale_from_unit(meta.scale_to_unit(score).unwrap());
            if back != score {
                failures.push(format!("set {} score {score} -> {back}", meta.essay_set));
            }
        }
    }
    let (config, d) = small_run();
    let prepared = prepare(&d, None).unwrap();
    let plan = make_fold(&d, 8, config.dev_fraction, config.seed).unwrap();
    let (ckpt, result) = train_fold(&d, &prepared, &plan, &config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fold_8.ckpt");
    ckpt.save(&path).unwrap();
    let loaded = Checkpoint::load(&path).unwrap();
    let (qwk, preds) = evaluate_checkpoint(&loaded, &d, &prepared, &plan.test).unwrap();
    let exact =
        loaded == ckpt && qwk.to_bits() == result.test_qwk.to_bits() && preds == result.predictions;
    verdict(
        failures.is_empty() && exact,
        format!("score round-trip failures {failures:?}, checkpoint reload exact: {exact}"),
    )
}

fn criterion_8() -> Outcome {
    let (config, d) = small_run();
    let prepared = prepare(&d, None).unwrap();
    let plan = make_fold(&d, 5, config.dev_fraction, config.seed).unwrap();
    let (c1, r1) = train_fold(&d, &prepared, &plan, &config).unwrap();
    let (c2, r2) = train_fold(&d, &prepared, &plan, &config).unwrap();
    let same_ckpt = c1.to_bytes() == c2.to_bytes();
    let same_qwk = r1.test_qwk.to_bits() == r2.test_qwk.to_bits();
    verdict(
        same_ckpt && same_qwk && r1.same_outcome(&r2),
        format!(
            "identical checkpoints: {same_ckpt}, identical QWK: {same_qwk} ({})",
            r1.test_qwk
        ),
    )
}

const TABLE_COUNTS: [(usize, usize, usize); 8] = [
    (1783, 10, 47),
    (1800, 24, 7),
    (1726, 39, 423),
    (1772, 312, 253),
    (1805, 24, 258),
    (1800, 44, 367),
    (1569, 0, 0),
    (723, 0, 1),
];

fn asap_path() -> Option<PathBuf> {
    std::env::var_os("ASAP_TSV").map(PathBuf::from)
}

fn criterion_9() -> Outcome {
    let Some(path) = asap_path() else {
        return Skip("ASAP_TSV not set".into());
    };
    let d = match load_dataset(&path) {
        Ok(d) => d,
        Err(e) => return Fail(format!("cannot load {}: {e}", path.display())),
    };
    let stats = dataset_stats(&d);
    let got: Vec<(usize, usize, usize)> = stats
        .iter()
        .map(|s| (s.count, s.min_score_count, s.max_score_count))
        .collect();
    verdict(
        got == TABLE_COUNTS,
        format!("(count, min-score, max-score) per set: {got:?}"),
    )
}

fn criterion_10() -> Outcome {
    let Some(path) = asap_path() else {
        return Skip("ASAP_TSV not set".into());
    };
    if std::env::var_os("PAES_FULL").is_none() {
        return Skip("PAES_FULL not set".into());
    }
    let d = match load_dataset(&path) {
        Ok(d) => d,
        Err(e) => return Fail(format!("cannot load {}: {e}", path.display())),
    };
    let config = RunConfig::default();
    let prepared = prepare(&d, None).unwrap();
    let cv = match run_cross_validation(&d, &prepared, &config) {
        Ok(cv) => cv,
        Err(e) => return Fail(format!("cross-validation failed: {e}")),
    };
    let curve = subsample_curve(&d, &prepared, &cv, &config, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    let monotone = curve.windows(2).all(|w| w[1].1 >= w[0].1 - 0.02);
    let average = cv.average();
    verdict(
        average >= 0.60 && monotone,
        format!(
            "average QWK {average:.4} (reference 0.686, target >= 0.60); subsample curve {curve:?}"
        ),
    )
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    // `cargo test -- --list` and similar probes expect no side effects.
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 10] = [
        ("1 qwk oracle equivalence", criterion_1),
        ("2 gradient correctness", criterion_2),
        ("3 forward oracle", criterion_3),
        ("4 attention invariants", criterion_4),
        ("5 overfit sanity", criterion_5),
        ("6 feature contract", criterion_6),
        ("7 round-trip exactness", criterion_7),
        ("8 determinism", criterion_8),
        ("9 dataset statistics", criterion_9),
        ("10 full reproduction", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let (tag, detail) = match run() {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("criterion {name:<28} {tag}  {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
