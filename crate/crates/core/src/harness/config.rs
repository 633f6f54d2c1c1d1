//! Run configuration: flat `key=value` text, later settings win.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::text_prep::{EmbeddingMode, MAX_SENTENCES, MAX_TOKENS};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub target_prompt: Option<u8>,
    /// `None` drops the text encoder (features-only model).
    pub mode: Option<EmbeddingMode>,
    pub features: bool,
    pub seed: u64,
    pub epochs: usize,
    pub batch: usize,
    /// Fraction of target-prompt essays visible for fitting their feature
    /// normalization.
    pub subsample: f64,
    pub out: PathBuf,
    pub pretagged: Option<PathBuf>,
    pub dropout: bool,
    pub clip_norm: Option<f64>,
    pub dev_fraction: f64,
    pub max_sentences: usize,
    pub max_tokens: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: None,
            target_prompt: None,
            mode: Some(EmbeddingMode::Pos),
            features: true,
            seed: 42,
            epochs: 60,
            batch: 16,
            subsample: 1.0,
            out: PathBuf::from("runs"),
            pretagged: None,
            dropout: true,
            clip_norm: None,
            dev_fraction: 0.2,
            max_sentences: MAX_SENTENCES,
            max_tokens: MAX_TOKENS,
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "`{key}` expects on|off, got `{value}`"
        ))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl RunConfig {
    /// Applies one setting; keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let opt = |v: &str| (!v.is_empty() && v != "none").then(|| PathBuf::from(v));
        match key.as_str() {
            "data" => self.data = opt(value),
            "target_prompt" => {
                let p: u8 = parse_num(&key, value)?;
                if !(1..=8).contains(&p) {
                    return Err(Error::Config(format!(
                        "target_prompt must be 1..8, got {p}"
                    )));
                }
                self.target_prompt = Some(p);
            }
            "mode" => {
                self.mode = match value {
                    "none" | "features" => None,
                    other => Some(other.parse()?),
                }
            }
            "features" => self.features = parse_bool(&key, value)?,
            "seed" => self.seed = parse_num(&key, value)?,
            "epochs" => self.epochs = parse_num(&key, value)?,
            "batch" => self.batch = parse_num(&key, value)?,
            "subsample" => self.subsample = parse_num(&key, value)?,
            "out" => self.out = PathBuf::from(value),
            "pretagged" => self.pretagged = opt(value),
            "dropout" => self.dropout = parse_bool(&key, value)?,
            "clip_norm" => {
                self.clip_norm = match value {
                    "off" | "none" => None,
                    v => Some(parse_num(&key, v)?),
                }
            }
            "dev_fraction" => self.dev_fraction = parse_num(&key, value)?,
            "max_sentences" => self.max_sentences = parse_num(&key, value)?,
            "max_tokens" => self.max_tokens = parse_num(&key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse("config", no + 1, "expected key=value"))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = RunConfig::default();
        c.apply_text(&text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::Config(format!(
                "subsample must be in (0, 1], got {}",
                self.subsample
            )));
        }
        if self.mode.is_none() && !self.features {
            return Err(Error::Config(
                "features-only model needs features=on".into(),
            ));
        }
        if self.batch == 0 || self.max_sentences == 0 || self.max_tokens == 0 {
            return Err(Error::Config("batch and caps must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dev_fraction) {
            return Err(Error::Config("dev_fraction must be in [0, 1)".into()));
        }
        Ok(())
    }

    /// `key=value` echo that [`RunConfig::apply_text`] reads back.
    pub fn to_text(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map_or("none".to_string(), |p| p.display().to_string())
        };
        let onoff = |b: bool| if b { "on" } else { "off" };
        let mut s = String::new();
        let _ = writeln!(s, "data={}", path(&self.data));
        if let Some(p) = self.target_prompt {
            let _ = writeln!(s, "target_prompt={p}");
        }
        let _ = writeln!(
            s,
            "mode={}",
            self.mode.map_or("none".to_string(), |m| m.to_string())
        );
        let _ = writeln!(s, "features={}", onoff(self.features));
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "epochs={}", self.epochs);
        let _ = writeln!(s, "batch={}", self.batch);
        let _ = writeln!(s, "subsample={:?}", self.subsample);
        let _ = writeln!(s, "out={}", self.out.display());
        let _ = writeln!(s, "pretagged={}", path(&self.pretagged));
        let _ = writeln!(s, "dropout={}", onoff(self.dropout));
        let _ = writeln!(
            s,
            "clip_norm={}",
            self.clip_norm
                .map_or("off".to_string(), |c| format!("{c:?}"))
        );
        let _ = writeln!(s, "dev_fraction={:?}", self.dev_fraction);
        let _ = writeln!(s, "max_sentences={}", self.max_sentences);
        let _ = writeln!(s, "max_tokens={}", self.max_tokens);
        s
    }
}
