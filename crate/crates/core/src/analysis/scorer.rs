//! Emotion scorers.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Deserialize;

use super::features::emoji_name;
use crate::emotion::{Emotion, EmotionScores};

const BUNDLED_LEXICON: &str = include_str!("../../data/lexicon.tsv");

#[derive(Debug, thiserror::Error)]
pub enum ScorerError {
    #[error("scorer request failed: {0}")]
    Request(String),
    #[error("scorer returned an unusable response: {0}")]
    Response(String),
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("cannot read lexicon: {0}")]
    Io(#[from] std::io::Error),
    #[error("lexicon line {line}: {reason}")]
    Line { line: usize, reason: String },
}

/// Produces raw emotion intensities for a cleaned text.
pub trait EmotionScorer: Send + Sync {
    fn score(&self, text: &str) -> Result<EmotionScores, ScorerError>;
}

/// Averages per-token emotion associations over the tokens that have any
/// association. Tokens are lower-cased words; each emoji contributes its
/// table name as one token.
#[derive(Debug, Clone, Default)]
pub struct LexiconScorer {
    entries: HashMap<String, [f64; 8]>,
}

impl LexiconScorer {
    /// The lexicon bundled with the crate.
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_LEXICON).expect("bundled lexicon parses")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::from_tsv(&fs::read_to_string(path)?)
    }

    /// Parses `token<TAB>emotion<TAB>score` rows. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut entries: HashMap<String, [f64; 8]> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| LexiconError::Line { line: i + 1, reason };
            let cols: Vec<&str> = line.split('\t').collect();
            let [token, emotion, score] = cols[..] else {
                return Err(bad(format!("expected 3 tab-separated columns, got {}", cols.len())));
            };
            let emotion: Emotion = emotion.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let score: f64 = score.trim().parse().map_err(|_| bad(format!("bad score `{score}`")))?;
            if !(0.0..=1.0).contains(&score) {
                return Err(bad(format!("score {score} outside [0, 1]")));
            }
            entries.entry(token.trim().to_lowercase()).or_default()[emotion.index()] = score;
        }
        Ok(Self { entries })
    }

    pub fn insert(&mut self, token: &str, emotion: Emotion, score: f64) {
        self.entries.entry(token.to_lowercase()).or_default()[emotion.index()] = score;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, token: &str) -> Option<&[f64; 8]> {
        self.entries.get(token)
    }
}

/// Lower-cased word tokens plus one token per known emoji.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '\'' || c == '’' {
            word.extend(c.to_lowercase());
            continue;
        }
        flush_word(&mut word, &mut tokens);
        if let Some(name) = emoji_name(c) {
            tokens.push(name.to_string());
        }
    }
    flush_word(&mut word, &mut tokens);
    tokens
}

fn flush_word(word: &mut String, tokens: &mut Vec<String>) {
    let trimmed = word.trim_matches(|c| c == '\'' || c == '’');
    if !trimmed.is_empty() {
        tokens.push(trimmed.to_string());
    }
    word.clear();
}

impl EmotionScorer for LexiconScorer {
    fn score(&self, text: &str) -> Result<EmotionScores, ScorerError> {
        let mut sums = [0.0; 8];
        let mut hits = 0usize;
        for token in tokenize(text) {
            if let Some(assoc) = self.entries.get(&token) {
                hits += 1;
                for (s, a) in sums.iter_mut().zip(assoc) {
                    *s += a;
                }
            }
        }
        if hits == 0 {
            return Ok(EmotionScores::zero());
        }
        Ok(EmotionScores::clamped(sums.map(|s| s / hits as f64)))
    }
}

/// Adapter for an external model served over HTTP.
///
/// Sends `{"text": "..."}` as a JSON POST and accepts either a flat object
/// of emotion scores or one nested under `"scores"`. Missing emotions
/// score 0; unknown keys are ignored.
#[derive(Debug, Clone)]
pub struct HttpScorer {
    url: String,
    timeout: Duration,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScoreResponse {
    Nested { scores: HashMap<String, f64> },
    Flat(HashMap<String, f64>),
}

impl HttpScorer {
    pub fn new(url: impl Into<String>) -> Self {
        Self { url: url.into(), timeout: Duration::from_secs(10) }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

impl EmotionScorer for HttpScorer {
    fn score(&self, text: &str) -> Result<EmotionScores, ScorerError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut response = agent
            .post(&self.url)
            .send_json(serde_json::json!({ "text": text }))
            .map_err(|e| ScorerError::Request(e.to_string()))?;
        let body: ScoreResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| ScorerError::Response(e.to_string()))?;
        let map = match body {
            ScoreResponse::Nested { scores } => scores,
            ScoreResponse::Flat(map) => map,
        };
        let mut values = [0.0; 8];
        for e in Emotion::ALL {
            if let Some(v) = map.get(e.name()) {
                values[e.index()] = *v;
            }
        }
        Ok(EmotionScores::clamped(values))
    }
}
