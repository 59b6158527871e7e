//! Shared inputs for the criterion benchmarks.

use std::path::{Path, PathBuf};

use secondlang::bench::GoldSet;

/// The repository's `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Sentences from the demo gold set.
pub fn demo_sentences() -> Vec<String> {
    let path = fixtures_dir().join("demo/gold.tsv");
    let text = std::fs::read_to_string(&path).expect("demo gold set");
    GoldSet::from_tsv("demo", &text)
        .expect("valid gold set")
        .items
        .into_iter()
        .map(|(s, _)| s)
        .collect()
}
