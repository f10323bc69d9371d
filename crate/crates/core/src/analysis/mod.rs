//! Input preprocessing: features, emotion classification, sentences and
//! line division.

pub mod features;
pub mod lines;
pub mod scorer;
pub mod sentences;

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{DateTime, Utc};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::StyleConfig;
use crate::emotion::EmotionProfile;
pub use features::{extract_features, Features, TweetMeta};
pub use lines::{divide_lines, LinePlan};
pub use scorer::{EmotionScorer, HttpScorer, LexiconScorer, ScorerError};
pub use sentences::split_sentences;

/// A short text with its creation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    pub created_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
    #[serde(default, skip_serializing)]
    pub meta: TweetMeta,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus line {line}: {source}")]
    Line { line: usize, source: serde_json::Error },
}

/// Reads a JSONL corpus: one `{id, text, created_at, lang?}` object per
/// line. Blank lines are skipped.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Tweet>, CorpusError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: Tweet = serde_json::from_str(&line).map_err(|source| CorpusError::Line { line: i + 1, source })?;
        out.push(tweet);
    }
    Ok(out)
}

/// Translation into the scorer's language. The default is the identity.
pub trait Translator: Send + Sync {
    fn translate(&self, text: &str, lang: Option<&str>) -> Result<String, ScorerError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityTranslator;

impl Translator for IdentityTranslator {
    fn translate(&self, text: &str, _lang: Option<&str>) -> Result<String, ScorerError> {
        Ok(text.to_string())
    }
}

/// Scores a feature-cleaned text and derives the predominant emotions.
pub fn classify(text: &str, scorer: &dyn EmotionScorer, threshold: f64) -> Result<EmotionProfile, ScorerError> {
    let scores = scorer.score(text)?;
    Ok(EmotionProfile::from_scores(scores, threshold))
}

/// Everything preprocessing derives from one text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub meta: TweetMeta,
    pub cleaned: String,
    pub profile: EmotionProfile,
    pub plan: LinePlan,
}

/// Full preprocessing chain: translate, extract features, classify, split
/// sentences and divide lines.
pub struct Analyzer<'a> {
    pub scorer: &'a dyn EmotionScorer,
    pub translator: &'a dyn Translator,
}

impl<'a> Analyzer<'a> {
    pub fn new(scorer: &'a dyn EmotionScorer) -> Self {
        Self { scorer, translator: &IdentityTranslator }
    }

    pub fn analyze<R: Rng + ?Sized>(
        &self,
        text: &str,
        lang: Option<&str>,
        rng: &mut R,
        config: &StyleConfig,
    ) -> Result<Analysis, ScorerError> {
        let Features { meta, cleaned } = extract_features(text);
        let translated = self.translator.translate(&cleaned, lang)?;
        let profile = classify(&translated, self.scorer, config.predominance_threshold)?;
        let plan = divide_lines(&split_sentences(&cleaned), rng, &config.line_division);
        Ok(Analysis { meta, cleaned, profile, plan })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emotion::Emotion;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_text_is_neutral() {
        let p = classify("", &LexiconScorer::bundled(), 0.3).unwrap();
        assert!(p.neutral);
        assert!(p.scores.iter().all(|(_, v)| v == 0.0));
    }

    #[test]
    fn unknown_words_are_neutral() {
        let p = classify("qwzx plorb vrrn", &LexiconScorer::bundled(), 0.3).unwrap();
        assert!(p.neutral);
    }

    #[test]
    fn analysis_chain() {
        let scorer = LexiconScorer::bundled();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Analyzer::new(&scorer)
            .analyze("So happy today! #Coimbra https://t.co/z", None, &mut rng, StyleConfig::shipped())
            .unwrap();
        assert_eq!(a.cleaned, "So happy today! Coimbra");
        assert_eq!(a.profile.primary(), Some(Emotion::Joy));
        assert_eq!(a.plan.lines, vec!["So happy today!", "Coimbra"]);
    }

    #[test]
    fn corpus_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        fs::write(
            &path,
            "{\"id\":\"1\",\"text\":\"hi\",\"created_at\":\"2021-05-01T10:00:00Z\"}\n\n{\"id\":\"2\",\"text\":\"ola\",\"created_at\":\"2021-05-01T10:01:00Z\",\"lang\":\"pt\"}\n",
        )
        .unwrap();
        let tweets = read_corpus(&path).unwrap();
        assert_eq!(tweets.len(), 2);
        assert_eq!(tweets[1].lang.as_deref(), Some("pt"));
        fs::write(&path, "{\"id\":\"1\"}\n").unwrap();
        assert!(matches!(read_corpus(&path), Err(CorpusError::Line { line: 1, .. })));
    }
}
