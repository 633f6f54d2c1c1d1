use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use crate::metrics::{prompt_meta, PromptMeta, ASAP_PROMPTS};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Essay {
    pub essay_id: String,
    pub essay_set: u8,
    pub text: String,
    pub score: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub essays: Vec<Essay>,
    pub metas: Vec<PromptMeta>,
}

const COLUMNS: [&str; 4] = ["essay_id", "essay_set", "essay", "domain1_score"];

impl Dataset {
    pub fn new(essays: Vec<Essay>) -> Result<Self> {
        let mut ids = HashSet::new();
        for e in &essays {
            let meta = prompt_meta(e.essay_set)?;
            if !meta.contains(e.score) {
                return Err(Error::ScoreOutOfRange {
                    essay_set: e.essay_set,
                    score: e.score,
                    min: meta.score_min,
                    max: meta.score_max,
                });
            }
            if !ids.insert(e.essay_id.as_str()) {
                return Err(Error::Dataset(format!("duplicate essay_id {}", e.essay_id)));
            }
        }
        Ok(Dataset {
            essays,
            metas: ASAP_PROMPTS.to_vec(),
        })
    }

    pub fn meta(&self, essay_set: u8) -> Result<PromptMeta> {
        self.metas
            .iter()
            .find(|m| m.essay_set == essay_set)
            .copied()
            .ok_or(Error::UnknownEssaySet(essay_set))
    }

    pub fn prompts(&self) -> Vec<u8> {
        let mut p: Vec<u8> = self.essays.iter().map(|e| e.essay_set).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn indices_of(&self, essay_set: u8) -> Vec<usize> {
        (0..self.essays.len())
            .filter(|i| self.essays[*i].essay_set == essay_set)
            .collect()
    }
}

/// Reads the ASAP tab-separated file, decoding Windows-1252.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let dataset = parse_dataset(&bytes)?;
    if dataset.essays.is_empty() {
        return Err(Error::NoEssays(path.to_path_buf()));
    }
    Ok(dataset)
}

/// Parses TSV bytes; an input with no essays yields an empty dataset.
pub fn parse_dataset(bytes: &[u8]) -> Result<Dataset> {
    let (text, _, had_errors) = encoding_rs::WINDOWS_1252.decode(bytes);
    if had_errors {
        log::warn!("invalid bytes replaced while decoding input");
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .flexible(true)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut cols = [0usize; 4];
    for (slot, name) in cols.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Dataset(format!("missing column `{name}`")))?;
    }

    let mut essays = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(cols[i]).map(str::trim);
        let essay_id = field(0)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::parse("dataset", line, "missing essay_id"))?
            .to_string();
        let essay_set: u8 = field(1).and_then(|s| s.parse().ok()).ok_or_else(|| {
            Error::parse("dataset", line, format!("essay {essay_id}: bad essay_set"))
        })?;
        let meta = prompt_meta(essay_set).map_err(|_| {
            Error::parse(
                "dataset",
                line,
                format!("essay {essay_id}: essay_set {essay_set} outside 1..8"),
            )
        })?;
        let text = record.get(cols[2]).unwrap_or("").to_string();
        let score = match field(3) {
            None | Some("") => {
                log::warn!("line {line}: essay {essay_id} has no domain1_score, skipped");
                continue;
            }
            Some(s) => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.fract() == 0.0)
                .map(|v| v as i64)
                .ok_or_else(|| {
                    Error::parse(
                        "dataset",
                        line,
                        format!("essay {essay_id}: bad domain1_score `{s}`"),
                    )
                })?,
        };
        if !meta.contains(score) {
            return Err(Error::parse(
                "dataset",
                line,
                format!(
                    "essay {essay_id}: score {score} outside [{}, {}] for set {essay_set}",
                    meta.score_min, meta.score_max
                ),
            ));
        }
        essays.push(Essay {
            essay_id,
            essay_set,
            text,
            score,
        });
    }
    Dataset::new(essays)
}

/// One row of the per-prompt summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SetStats {
    pub essay_set: u8,
    pub genre: String,
    pub count: usize,
    /// Mean whitespace-separated word count.
    pub mean_length: f64,
    pub score_min: i64,
    pub score_max: i64,
    pub min_score_count: usize,
    pub max_score_count: usize,
}

pub fn dataset_stats(dataset: &Dataset) -> Vec<SetStats> {
    let mut by_set: BTreeMap<u8, Vec<&Essay>> = BTreeMap::new();
    for e in &dataset.essays {
        by_set.entry(e.essay_set).or_default().push(e);
    }
    by_set
        .into_iter()
        .map(|(set, essays)| {
            let meta = dataset.meta(set).expect("validated at load");
            let words: usize = essays
                .iter()
                .map(|e| e.text.split_whitespace().count())
                .sum();
            SetStats {
                essay_set: set,
                genre: meta.genre.to_string(),
                count: essays.len(),
                mean_length: words as f64 / essays.len() as f64,
                score_min: meta.score_min,
                score_max: meta.score_max,
                min_score_count: essays.iter().filter(|e| e.score == meta.score_min).count(),
                max_score_count: essays.iter().filter(|e| e.score == meta.score_max).count(),
            }
        })
        .collect()
}
