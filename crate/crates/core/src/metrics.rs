//! Score scaling and quadratic weighted kappa.

use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Genre {
    Argumentative,
    Response,
    Narrative,
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Genre::Argumentative => "ARG",
            Genre::Response => "RES",
            Genre::Narrative => "NAR",
        })
    }
}

/// Score range and genre of one essay set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PromptMeta {
    pub essay_set: u8,
    pub score_min: i64,
    pub score_max: i64,
    pub genre: Genre,
}

const fn meta(essay_set: u8, score_min: i64, score_max: i64, genre: Genre) -> PromptMeta {
    PromptMeta {
        essay_set,
        score_min,
        score_max,
        genre,
    }
}

/// The eight ASAP prompts.
pub const ASAP_PROMPTS: [PromptMeta; 8] = [
    meta(1, 2, 12, Genre::Argumentative),
    meta(2, 1, 6, Genre::Argumentative),
    meta(3, 0, 3, Genre::Response),
    meta(4, 0, 3, Genre::Response),
    meta(5, 0, 4, Genre::Response),
    meta(6, 0, 4, Genre::Response),
    meta(7, 0, 30, Genre::Narrative),
    meta(8, 0, 60, Genre::Narrative),
];

pub fn prompt_meta(essay_set: u8) -> Result<PromptMeta> {
    ASAP_PROMPTS
        .iter()
        .find(|m| m.essay_set == essay_set)
        .copied()
        .ok_or(Error::UnknownEssaySet(essay_set))
}

impl PromptMeta {
    pub fn num_ratings(&self) -> usize {
        (self.score_max - self.score_min + 1) as usize
    }

    pub fn contains(&self, score: i64) -> bool {
        (self.score_min..=self.score_max).contains(&score)
    }

    fn check(&self, score: i64) -> Result<()> {
        if self.contains(score) {
            Ok(())
        } else {
            Err(Error::ScoreOutOfRange {
                essay_set: self.essay_set,
                score,
                min: self.score_min,
                max: self.score_max,
            })
        }
    }

    /// `(score - min) / (max - min)`.
    pub fn scale_to_unit(&self, score: i64) -> Result<f64> {
        self.check(score)?;
        Ok((score - self.score_min) as f64 / (self.score_max - self.score_min) as f64)
    }

    /// Maps a unit-interval prediction back to the integer score grid,
    /// rounding half away from zero and clamping to the range.
    pub fn rescale_from_unit(&self, y: f64) -> i64 {
        let raw = self.score_min as f64 + y * (self.score_max - self.score_min) as f64;
        (raw.round() as i64).clamp(self.score_min, self.score_max)
    }
}

/// `W[i][j] = (i - j)^2 / (R - 1)^2`.
pub fn build_weight_matrix(ratings: usize) -> Result<Vec<Vec<f64>>> {
    if ratings < 2 {
        return Err(Error::InvalidRatingCount(ratings));
    }
    let denom = ((ratings - 1) * (ratings - 1)) as f64;
    Ok((0..ratings)
        .map(|i| {
            (0..ratings)
                .map(|j| {
                    let d = i as f64 - j as f64;
                    d * d / denom
                })
                .collect()
        })
        .collect())
}

/// Every intermediate of a kappa evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QwkComputation {
    pub ratings: usize,
    pub weights: Vec<Vec<f64>>,
    pub observed: Vec<Vec<f64>>,
    /// Outer product of the two histograms, scaled to the same total as `observed`.
    pub expected: Vec<Vec<f64>>,
    pub kappa: f64,
}

/// Kappa over scores on `[min, max]`, shifted to 0-based rating indices.
pub fn qwk_computation(
    human: &[i64],
    pred: &[i64],
    score_min: i64,
    score_max: i64,
) -> Result<QwkComputation> {
    if human.len() != pred.len() {
        return Err(Error::LengthMismatch(human.len(), pred.len()));
    }
    if human.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if score_max < score_min {
        return Err(Error::InvalidRatingCount(0));
    }
    let ratings = (score_max - score_min + 1) as usize;
    let weights = build_weight_matrix(ratings)?;

    let to_index = |s: i64| -> Result<usize> {
        if (score_min..=score_max).contains(&s) {
            Ok((s - score_min) as usize)
        } else {
            Err(Error::ScoreOutOfRange {
                essay_set: 0,
                score: s,
                min: score_min,
                max: score_max,
            })
        }
    };

    let mut observed = vec![vec![0.0; ratings]; ratings];
    let mut hist_h = vec![0.0; ratings];
    let mut hist_p = vec![0.0; ratings];
    for (&h, &p) in human.iter().zip(pred) {
        let (i, j) = (to_index(h)?, to_index(p)?);
        observed[i][j] += 1.0;
        hist_h[i] += 1.0;
        hist_p[j] += 1.0;
    }

    let n = human.len() as f64;
    let expected: Vec<Vec<f64>> = hist_h
        .iter()
        .map(|a| hist_p.iter().map(|b| a * b / n).collect())
        .collect();

    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..ratings {
        for j in 0..ratings {
            num += weights[i][j] * observed[i][j];
            den += weights[i][j] * expected[i][j];
        }
    }

    let kappa = if den == 0.0 {
        // Both raters constant and equal; kappa is 1 only with perfect agreement.
        if num == 0.0 {
            1.0
        } else {
            return Err(Error::UndefinedKappa);
        }
    } else {
        1.0 - num / den
    };

    Ok(QwkComputation {
        ratings,
        weights,
        observed,
        expected,
        kappa,
    })
}

pub fn qwk(human: &[i64], pred: &[i64], meta: &PromptMeta) -> Result<f64> {
    qwk_computation(human, pred, meta.score_min, meta.score_max)
        .map(|c| c.kappa)
        .map_err(|e| match e {
            Error::ScoreOutOfRange {
                score, min, max, ..
            } => Error::ScoreOutOfRange {
                essay_set: meta.essay_set,
                score,
                min,
                max,
            },
            other => other,
        })
}
