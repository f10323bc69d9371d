//! Bench texts and synthetic feeds.

use std::fs;
use std::path::Path;

use chrono::{DateTime, Duration, Utc};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Tweet;

const BUNDLED_BENCH: &str = include_str!("../../data/bench_texts.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchText {
    pub id: String,
    pub text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchTextError {
    #[error("cannot read bench texts: {0}")]
    Io(#[from] std::io::Error),
    #[error("bench texts line {0}: expected `id<TAB>text`")]
    Line(usize),
}

/// Parses `id<TAB>text` lines; `#` comments and blank lines are skipped.
pub fn parse_bench_texts(tsv: &str) -> Result<Vec<BenchText>, BenchTextError> {
    let mut out = Vec::new();
    for (i, line) in tsv.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, text) = line.split_once('\t').ok_or(BenchTextError::Line(i + 1))?;
        if id.trim().is_empty() || text.trim().is_empty() {
            return Err(BenchTextError::Line(i + 1));
        }
        out.push(BenchText { id: id.trim().into(), text: text.trim().into() });
    }
    Ok(out)
}

pub fn read_bench_texts(path: impl AsRef<Path>) -> Result<Vec<BenchText>, BenchTextError> {
    parse_bench_texts(&fs::read_to_string(path)?)
}

/// The sixteen reference texts shipped with the crate.
pub fn bundled_bench_texts() -> Vec<BenchText> {
    parse_bench_texts(BUNDLED_BENCH).expect("bundled bench texts parse")
}

/// `n` items created at random moments in the `span` before `end`, with
/// texts cycled from the bench set.
pub fn synthetic_corpus<R: Rng + ?Sized>(n: usize, end: DateTime<Utc>, span: Duration, rng: &mut R) -> Vec<Tweet> {
    let texts = bundled_bench_texts();
    let span_ms = span.num_milliseconds().max(1);
    (0..n)
        .map(|i| Tweet {
            id: format!("s{i:04}"),
            text: texts[i % texts.len()].text.clone(),
            created_at: end - Duration::milliseconds(rng.random_range(0..=span_ms)),
            lang: Some("en".into()),
            meta: Default::default(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bundled_set_matches_reference_shape() {
        let texts = bundled_bench_texts();
        assert_eq!(texts.len(), 16);
        for t in &texts {
            let n = t.text.chars().count();
            assert!((22..=219).contains(&n), "{} has {n} chars", t.id);
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_bench_texts("a\tb\nno tab"), Err(BenchTextError::Line(2))));
        assert!(matches!(parse_bench_texts("\tb"), Err(BenchTextError::Line(1))));
    }

    #[test]
    fn synthetic_items_fall_in_span() {
        let end = Utc.with_ymd_and_hms(2021, 5, 1, 0, 0, 0).unwrap();
        let items = synthetic_corpus(500, end, Duration::hours(6), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(items.len(), 500);
        assert!(items.iter().all(|t| t.created_at <= end && t.created_at >= end - Duration::hours(6)));
    }
}
