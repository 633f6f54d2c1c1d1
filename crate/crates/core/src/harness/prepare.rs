use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;

use super::dataset::Dataset;
use crate::features::extract;
use crate::text_prep::{analyze, read_pretagged, TaggedSentence};
use crate::{Error, Result};

/// Tagged sentences and raw features of one essay.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedEssay {
    pub sentences: Vec<TaggedSentence>,
    pub raw_features: Vec<f64>,
}

/// Reads a pre-tagged corpus keyed by essay id.
pub fn load_pretagged(path: &Path) -> Result<HashMap<String, Vec<TaggedSentence>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashMap::new();
    for essay in read_pretagged(&text)? {
        let id = essay.essay_id.ok_or_else(|| {
            Error::Dataset(format!(
                "{}: pre-tagged essays need `# essay <id>` lines",
                path.display()
            ))
        })?;
        out.insert(id, essay.sentences);
    }
    Ok(out)
}

/// Tags (or looks up) and featurizes every essay, in dataset order.
pub fn prepare(
    dataset: &Dataset,
    pretagged: Option<&HashMap<String, Vec<TaggedSentence>>>,
) -> Result<Vec<PreparedEssay>> {
    dataset
        .essays
        .par_iter()
        .map(|essay| {
            let sentences = match pretagged {
                Some(map) => map.get(&essay.essay_id).cloned().ok_or_else(|| {
                    Error::Dataset(format!(
                        "essay {} missing from pre-tagged input",
                        essay.essay_id
                    ))
                })?,
                None => analyze(&essay.text),
            };
            let raw_features = extract(&sentences);
            Ok(PreparedEssay {
                sentences,
                raw_features,
            })
        })
        .collect()
}
