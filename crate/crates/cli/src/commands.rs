use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use paes_core::features::{apply_normalization, fit_normalization, FeatureRegistry, FeatureVector};
use paes_core::harness::{
    dataset_stats, evaluate_checkpoint, load_dataset, load_pretagged, prepare,
    run_cross_validation, run_single_fold, subsample_curve, Dataset, PreparedEssay, RunConfig,
    RunDir,
};
use paes_core::metrics::{prompt_meta, qwk_computation};
use paes_core::neural::Checkpoint;
use paes_core::text_prep::{analyze, write_pretagged, PretaggedEssay};

fn data_path(config: &RunConfig) -> Result<&Path> {
    config.data.as_deref().context("--data is required")
}

fn load(config: &RunConfig) -> Result<(Dataset, Vec<PreparedEssay>)> {
    let path = data_path(config)?;
    let dataset = load_dataset(path)?;
    log::info!("{} essays from {}", dataset.essays.len(), path.display());
    let pretagged = config
        .pretagged
        .as_deref()
        .map(load_pretagged)
        .transpose()?;
    let prepared = prepare(&dataset, pretagged.as_ref())?;
    Ok((dataset, prepared))
}

fn open_run(config: &RunConfig) -> Result<RunDir> {
    let run = RunDir::create(&config.out)?;
    let mut inputs = vec![("data", data_path(config)?)];
    if let Some(p) = &config.pretagged {
        inputs.push(("pretagged", p.as_path()));
    }
    run.write_log(&config.to_text(), &inputs)?;
    Ok(run)
}

pub fn stats(config: &RunConfig) -> Result<()> {
    let dataset = load_dataset(data_path(config)?)?;
    println!(
        "{:>3} {:>6} {:>5} {:>8} {:>7} {:>9} {:>9}",
        "set", "essays", "genre", "mean_len", "range", "min_count", "max_count"
    );
    for s in dataset_stats(&dataset) {
        println!(
            "{:>3} {:>6} {:>5} {:>8.1} {:>7} {:>9} {:>9}",
            s.essay_set,
            s.count,
            s.genre,
            s.mean_length,
            format!("{}-{}", s.score_min, s.score_max),
            s.min_score_count,
            s.max_score_count
        );
    }
    Ok(())
}

fn feature_csv(path: &Path, dataset: &Dataset, rows: &[FeatureVector]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let registry = FeatureRegistry::reference();
    let mut header = vec!["essay_id".to_string(), "essay_set".to_string()];
    header.extend(registry.names().map(str::to_string));
    w.write_record(&header)?;
    for (essay, v) in dataset.essays.iter().zip(rows) {
        let mut record = vec![essay.essay_id.clone(), essay.essay_set.to_string()];
        record.extend(v.values.iter().map(|x| format!("{x:?}")));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn features_extract(config: &RunConfig) -> Result<()> {
    let (dataset, prepared) = load(config)?;
    let raw: Vec<FeatureVector> = dataset
        .essays
        .iter()
        .zip(&prepared)
        .map(|(e, p)| FeatureVector {
            essay_set: e.essay_set,
            values: p.raw_features.clone(),
        })
        .collect();
    let stats = fit_normalization(&raw);
    let normalized = raw
        .iter()
        .map(|v| apply_normalization(v, &stats))
        .collect::<paes_core::Result<Vec<_>>>()?;
    let run = RunDir::create(&config.out)?;
    feature_csv(&run.path("features_raw.csv"), &dataset, &raw)?;
    feature_csv(&run.path("features_normalized.csv"), &dataset, &normalized)?;
    println!("wrote {}", run.path("features_raw.csv").display());
    println!("wrote {}", run.path("features_normalized.csv").display());
    Ok(())
}

pub fn train(config: &RunConfig) -> Result<()> {
    let target = config
        .target_prompt
        .context("--target-prompt is required")?;
    let (dataset, prepared) = load(config)?;
    let run = open_run(config)?;
    let (ckpt, result) = run_single_fold(&dataset, &prepared, target, config)?;
    ckpt.save(&run.checkpoint_path(target))?;
    run.write_results(std::slice::from_ref(&result))?;
    println!(
        "prompt {target}: test QWK {:.4} (epoch {}, {:.1}s)",
        result.test_qwk, result.selected_epoch, result.seconds
    );
    println!("outputs in {}", run.root.display());
    Ok(())
}

pub fn eval(config: &RunConfig, checkpoint: &Path, prompt: Option<u8>) -> Result<()> {
    let ckpt = Checkpoint::load(checkpoint)?;
    let mut trained = RunConfig::default();
    trained.apply_text(&ckpt.config)?;
    let prompt = prompt
        .or(trained.target_prompt)
        .context("checkpoint names no held-out prompt; pass --prompt")?;
    if prompt_meta(prompt).is_err() {
        bail!("prompt must be 1..8");
    }
    let (dataset, prepared) = load(config)?;
    let indices = dataset.indices_of(prompt);
    if indices.is_empty() {
        bail!("no essays for prompt {prompt}");
    }
    let (qwk, predictions) = evaluate_checkpoint(&ckpt, &dataset, &prepared, &indices)?;
    let run = RunDir::create(&config.out)?;
    let path = run.write(
        &format!("predictions_{prompt}.csv"),
        &paes_core::harness::report::predictions_csv(&predictions)?,
    )?;
    println!(
        "prompt {prompt}: QWK {qwk:.4} over {} essays",
        indices.len()
    );
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cv(config: &RunConfig, extra_seeds: u64, curve: &[f64]) -> Result<()> {
    let (dataset, prepared) = load(config)?;
    let run = open_run(config)?;
    let result = run_cross_validation(&dataset, &prepared, config)?;
    for (ckpt, fold) in &result.folds {
        ckpt.save(&run.checkpoint_path(fold.target_prompt))?;
    }
    run.write_results(&result.results())?;
    print!("{}", std::fs::read_to_string(run.path("results.txt"))?);

    if extra_seeds > 0 {
        let mut averages = vec![result.average()];
        for k in 1..=extra_seeds {
            let seeded = RunConfig {
                seed: config.seed + k,
                ..config.clone()
            };
            let again = run_cross_validation(&dataset, &prepared, &seeded)?;
            log::info!("seed {}: average QWK {:.4}", seeded.seed, again.average());
            averages.push(again.average());
        }
        let mean = averages.iter().sum::<f64>() / averages.len() as f64;
        let line = format!("mean average QWK over {} seeds: {mean:.4}", averages.len());
        run.append_log(&line)?;
        println!("{line}");
    }

    if !curve.is_empty() {
        let points = subsample_curve(&dataset, &prepared, &result, config, curve)?;
        let mut text = String::from("fraction,average_qwk\n");
        for (f, q) in &points {
            text.push_str(&format!("{f:?},{q:?}\n"));
            println!("subsample {f:.2}: average QWK {q:.4}");
        }
        run.write("subsample_curve.csv", &text)?;
    }
    println!("outputs in {}", run.root.display());
    Ok(())
}

fn parse_range(range: &str) -> Result<(i64, i64)> {
    let (lo, hi) = range.split_once(':').context("--range expects MIN:MAX")?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

/// Reads integer pairs; a first line that does not parse is taken as a header.
fn read_pairs(path: &Path) -> Result<(Vec<i64>, Vec<i64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut human = Vec::new();
    let mut pred = Vec::new();
    for (no, record) in reader.records().enumerate() {
        let record = record?;
        let parsed = (
            record.get(0).map(str::parse::<i64>),
            record.get(1).map(str::parse::<i64>),
        );
        match parsed {
            (Some(Ok(h)), Some(Ok(p))) => {
                human.push(h);
                pred.push(p);
            }
            _ if no == 0 => continue,
            _ => bail!("{}: line {} is not two integers", path.display(), no + 1),
        }
    }
    Ok((human, pred))
}

pub fn qwk(file: &Path, range: Option<&str>, prompt: Option<u8>) -> Result<()> {
    let (lo, hi) = match (range, prompt) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(p)) => {
            let m = prompt_meta(p)?;
            (m.score_min, m.score_max)
        }
        (None, None) => bail!("pass --range MIN:MAX or --prompt"),
    };
    let (human, pred) = read_pairs(file)?;
    let k = qwk_computation(&human, &pred, lo, hi)?.kappa;
    println!("{k:.4}");
    Ok(())
}

pub fn pos_tag(input: Option<&Path>, data: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let essays: Vec<PretaggedEssay> = match (data, input) {
        (Some(path), _) => {
            let dataset = load_dataset(path)?;
            let prepared = prepare(&dataset, None)?;
            dataset
                .essays
                .iter()
                .zip(prepared)
                .map(|(e, p)| PretaggedEssay {
                    essay_id: Some(e.essay_id.clone()),
                    sentences: p.sentences,
                })
                .collect()
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            vec![PretaggedEssay {
                essay_id: None,
                sentences: analyze(&text),
            }]
        }
        (None, None) => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            vec![PretaggedEssay {
                essay_id: None,
                sentences: analyze(&text),
            }]
        }
    };
    let text = write_pretagged(&essays);
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", PathBuf::from(path).display());
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
