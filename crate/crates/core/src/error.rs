use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("no essays in {0}")]
    NoEssays(PathBuf),

    #[error("score {score} outside range [{min}, {max}] for essay set {essay_set}")]
    ScoreOutOfRange {
        essay_set: u8,
        score: i64,
        min: i64,
        max: i64,
    },

    #[error("unknown essay set {0}")]
    UnknownEssaySet(u8),

    #[error("index {index} out of range for vocabulary of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("non-finite gradient in parameter `{0}`")]
    NonFiniteGradient(String),

    #[error("non-finite loss at epoch {epoch}, batch {batch}: {loss}")]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        loss: f64,
    },

    #[error("shape mismatch for `{name}`: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("empty batch")]
    EmptyBatch,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid rating count {0}; need at least 2")]
    InvalidRatingCount(usize),

    #[error("kappa undefined: constant raters disagree")]
    UndefinedKappa,

    #[error("checksum mismatch in {what}")]
    Checksum { what: String },

    #[error("malformed {what} at line {line}: {detail}")]
    Parse {
        what: String,
        line: usize,
        detail: String,
    },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(what: impl Into<String>, line: usize, detail: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            line,
            detail: detail.into(),
        }
    }
}
