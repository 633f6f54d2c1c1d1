use paes_core::features::{extract, FeatureRegistry};
use paes_core::text_prep::analyze;

const ESSAYS: &str = include_str!("../fixtures/golden_essays.txt");
pub const GOLDEN_PATH: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/fixtures/golden_features.tsv"
);

/// `(id, essay_set, text)` triples of the fixture.
pub fn fixture() -> Vec<(String, u8, String)> {
    let mut out = Vec::new();
    let mut lines = ESSAYS.lines();
    while let Some(head) = lines.next() {
        let mut parts = head.trim_start_matches("# essay ").split(' ');
        let id = parts.next().unwrap().to_string();
        let set = parts.next().unwrap().parse().unwrap();
        out.push((id, set, lines.next().unwrap().to_string()));
    }
    out
}

/// Feature-major table: one row per feature, one column per essay.
pub fn render() -> String {
    let registry = FeatureRegistry::reference();
    let mut s = String::from("feature");
    let essays = fixture();
    let values: Vec<Vec<f64>> = essays
        .iter()
        .map(|(_, _, t)| extract(&analyze(t)))
        .collect();
    for (id, _, _) in &essays {
        s.push('\t');
        s.push_str(id);
    }
    s.push('\n');
    for (k, name) in registry.names().enumerate() {
        s.push_str(name);
        for v in &values {
            s.push_str(&format!("\t{:?}", v[k]));
        }
        s.push('\n');
    }
    s
}
