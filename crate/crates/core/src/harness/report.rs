use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::train::{FoldResult, Prediction};
use crate::{Error, Result};

/// One line of `results.csv`. `prompt` is `None` on the average row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub prompt: Option<u8>,
    pub qwk: f64,
    pub epoch: Option<usize>,
    pub seconds: f64,
}

pub fn result_rows(folds: &[FoldResult]) -> Vec<ResultRow> {
    let mut rows: Vec<ResultRow> = folds
        .iter()
        .map(|f| ResultRow {
            prompt: Some(f.target_prompt),
            qwk: f.test_qwk,
            epoch: Some(f.selected_epoch),
            seconds: f.seconds,
        })
        .collect();
    if !folds.is_empty() {
        rows.push(ResultRow {
            prompt: None,
            qwk: average_qwk(folds),
            epoch: None,
            seconds: folds.iter().map(|f| f.seconds).sum(),
        });
    }
    rows
}

pub fn average_qwk(folds: &[FoldResult]) -> f64 {
    folds.iter().map(|f| f.test_qwk).sum::<f64>() / folds.len() as f64
}

/// Floats are written with `{:?}` so they parse back to the same bits.
pub fn results_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["prompt", "qwk", "epoch", "seconds"])?;
    for r in rows {
        w.write_record([
            r.prompt.map_or("average".to_string(), |p| p.to_string()),
            format!("{:?}", r.qwk),
            r.epoch.map_or(String::new(), |e| e.to_string()),
            format!("{:?}", r.seconds),
        ])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Dataset(format!("csv flush: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (no, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |what: &str| Error::parse("results", no + 2, what.to_string());
        let field = |i: usize| record.get(i).ok_or_else(|| bad("short row"));
        let prompt = match field(0)? {
            "average" => None,
            p => Some(p.parse().map_err(|_| bad("prompt"))?),
        };
        let epoch = match field(2)? {
            "" => None,
            e => Some(e.parse().map_err(|_| bad("epoch"))?),
        };
        rows.push(ResultRow {
            prompt,
            qwk: field(1)?.parse().map_err(|_| bad("qwk"))?,
            epoch,
            seconds: field(3)?.parse().map_err(|_| bad("seconds"))?,
        });
    }
    Ok(rows)
}

/// Aligned table with one column per prompt and a trailing average.
pub fn results_table(rows: &[ResultRow]) -> String {
    let mut header = String::from("       ");
    let mut line = String::from("QWK    ");
    for r in rows {
        let label = r.prompt.map_or("Avg".to_string(), |p| p.to_string());
        let _ = write!(header, "{label:>8}");
        let _ = write!(line, "{:>8.3}", r.qwk);
    }
    format!("{}\n{}\n", header.trim_end(), line)
}

pub fn predictions_csv(predictions: &[Prediction]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["essay_id", "gold", "predicted"])?;
    for p in predictions {
        w.write_record([
            p.essay_id.clone(),
            p.gold.to_string(),
            p.predicted.to_string(),
        ])?;
    }
    finish(w)
}

pub fn parse_predictions_csv(text: &str) -> Result<Vec<Prediction>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (no, record) in reader.records().enumerate() {
        let record = record?;
        let bad = || Error::parse("predictions", no + 2, "expected essay_id,gold,predicted");
        let int = |i: usize| {
            record
                .get(i)
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(bad)
        };
        out.push(Prediction {
            essay_id: record.get(0).ok_or_else(bad)?.to_string(),
            gold: int(1)?,
            predicted: int(2)?,
        });
    }
    Ok(out)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Output directory of one run.
#[derive(Debug, Clone)]
pub struct RunDir {
    pub root: PathBuf,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(RunDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn checkpoint_path(&self, prompt: u8) -> PathBuf {
        self.path(&format!("fold_{prompt}.ckpt"))
    }

    /// Run log: configuration echo and input checksums.
    pub fn write_log(&self, config_text: &str, inputs: &[(&str, &Path)]) -> Result<()> {
        let mut log = String::from("# config\n");
        log.push_str(config_text);
        log.push_str("# inputs\n");
        for (label, path) in inputs {
            let _ = writeln!(
                log,
                "{label}={} sha256={}",
                path.display(),
                sha256_file(path)?
            );
        }
        self.write("run.log", &log)?;
        Ok(())
    }

    pub fn append_log(&self, line: &str) -> Result<()> {
        use std::io::Write;
        let path = self.path("run.log");
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        writeln!(f, "{line}").map_err(|e| Error::io(&path, e))
    }

    /// `predictions_<p>.csv` for every fold, then `results.csv` and `results.txt`.
    pub fn write_results(&self, folds: &[FoldResult]) -> Result<Vec<ResultRow>> {
        for f in folds {
            self.write(
                &format!("predictions_{}.csv", f.target_prompt),
                &predictions_csv(&f.predictions)?,
            )?;
            let curve: Vec<String> = f.dev_qwk.iter().map(|q| format!("{q:.4}")).collect();
            self.append_log(&format!(
                "fold {}: epoch {} test_qwk {:?} dev_qwk [{}] train_counts {:?}",
                f.target_prompt,
                f.selected_epoch,
                f.test_qwk,
                curve.join(" "),
                f.train_counts
            ))?;
        }
        let rows = result_rows(folds);
        self.write("results.csv", &results_csv(&rows)?)?;
        self.write("results.txt", &results_table(&rows))?;
        Ok(rows)
    }
}
