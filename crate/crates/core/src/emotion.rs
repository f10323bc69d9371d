//! The closed emotion vocabulary and the per-text emotion profile.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of Plutchik's eight basic emotions.
///
/// The declaration order is the canonical order used to break ties between
/// equal scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

impl Emotion {
    pub const ALL: [Emotion; 8] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Trust,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown emotion `{0}`")]
pub struct UnknownEmotion(pub String);

impl FromStr for Emotion {
    type Err = UnknownEmotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| UnknownEmotion(s.to_string()))
    }
}

/// An emotion or the neutral state. Used as the key of configuration rows
/// that need a dedicated neutral entry (typefaces, music).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Affect {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
    Neutral,
}

impl Affect {
    pub const ALL: [Affect; 9] = [
        Affect::Anger,
        Affect::Anticipation,
        Affect::Disgust,
        Affect::Fear,
        Affect::Joy,
        Affect::Sadness,
        Affect::Surprise,
        Affect::Trust,
        Affect::Neutral,
    ];

    pub fn name(self) -> &'static str {
        match self.emotion() {
            Some(e) => e.name(),
            None => "neutral",
        }
    }

    pub fn emotion(self) -> Option<Emotion> {
        match self {
            Affect::Anger => Some(Emotion::Anger),
            Affect::Anticipation => Some(Emotion::Anticipation),
            Affect::Disgust => Some(Emotion::Disgust),
            Affect::Fear => Some(Emotion::Fear),
            Affect::Joy => Some(Emotion::Joy),
            Affect::Sadness => Some(Emotion::Sadness),
            Affect::Surprise => Some(Emotion::Surprise),
            Affect::Trust => Some(Emotion::Trust),
            Affect::Neutral => None,
        }
    }
}

impl From<Emotion> for Affect {
    fn from(e: Emotion) -> Self {
        Affect::ALL[e.index()]
    }
}

impl fmt::Display for Affect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Intensity scores for all eight emotions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "BTreeMap<Emotion, f64>", into = "BTreeMap<Emotion, f64>")]
pub struct EmotionScores([f64; 8]);

impl EmotionScores {
    pub fn zero() -> Self {
        Self([0.0; 8])
    }

    /// Builds scores from raw values, clamping each into `[0, 1]`.
    /// Non-finite values become 0.
    pub fn clamped(values: [f64; 8]) -> Self {
        Self(values.map(|v| if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 }))
    }

    pub fn get(&self, e: Emotion) -> f64 {
        self.0[e.index()]
    }

    pub fn set(&mut self, e: Emotion, value: f64) {
        self.0[e.index()] = if value.is_finite() { value.clamp(0.0, 1.0) } else { 0.0 };
    }

    pub fn with(mut self, e: Emotion, value: f64) -> Self {
        self.set(e, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (Emotion, f64)> + '_ {
        Emotion::ALL.into_iter().map(move |e| (e, self.get(e)))
    }

    pub fn values(&self) -> [f64; 8] {
        self.0
    }
}

impl From<BTreeMap<Emotion, f64>> for EmotionScores {
    fn from(map: BTreeMap<Emotion, f64>) -> Self {
        let mut scores = Self::zero();
        for (e, v) in map {
            scores.set(e, v);
        }
        scores
    }
}

impl From<EmotionScores> for BTreeMap<Emotion, f64> {
    fn from(scores: EmotionScores) -> Self {
        scores.iter().collect()
    }
}

/// Emotions whose score reaches `threshold`, by descending score. Equal
/// scores keep the canonical emotion order.
pub fn predominant(scores: &EmotionScores, threshold: f64) -> Vec<Emotion> {
    let mut hits: Vec<Emotion> = Emotion::ALL
        .into_iter()
        .filter(|&e| scores.get(e) >= threshold)
        .collect();
    // stable sort keeps canonical order among ties
    hits.sort_by(|a, b| scores.get(*b).total_cmp(&scores.get(*a)));
    hits
}

/// Scores plus the derived predominant-emotion ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionProfile {
    pub scores: EmotionScores,
    pub predominant: Vec<Emotion>,
    pub neutral: bool,
}

impl EmotionProfile {
    pub fn from_scores(scores: EmotionScores, threshold: f64) -> Self {
        let predominant = predominant(&scores, threshold);
        let neutral = predominant.is_empty();
        Self { scores, predominant, neutral }
    }

    pub fn neutral() -> Self {
        Self { scores: EmotionScores::zero(), predominant: Vec::new(), neutral: true }
    }

    pub fn primary(&self) -> Option<Emotion> {
        self.predominant.first().copied()
    }

    pub fn secondary(&self) -> Option<Emotion> {
        self.predominant.get(1).copied()
    }

    /// The affect that drives music and typeface selection.
    pub fn affect(&self) -> Affect {
        self.primary().map(Affect::from).unwrap_or(Affect::Neutral)
    }

    pub fn score(&self, e: Emotion) -> f64 {
        self.scores.get(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_emotion_above_threshold() {
        let s = EmotionScores::zero().with(Emotion::Joy, 0.8);
        assert_eq!(predominant(&s, 0.3), vec![Emotion::Joy]);
    }

    #[test]
    fn all_zero_is_neutral() {
        let p = EmotionProfile::from_scores(EmotionScores::zero(), 0.3);
        assert!(p.predominant.is_empty());
        assert!(p.neutral);
        assert_eq!(p.affect(), Affect::Neutral);
    }

    #[test]
    fn ties_follow_canonical_order() {
        let s = EmotionScores::zero().with(Emotion::Fear, 0.6).with(Emotion::Anger, 0.6);
        assert_eq!(predominant(&s, 0.5), vec![Emotion::Anger, Emotion::Fear]);
    }

    #[test]
    fn threshold_is_inclusive() {
        let s = EmotionScores::zero().with(Emotion::Trust, 0.3);
        assert_eq!(predominant(&s, 0.3), vec![Emotion::Trust]);
    }

    #[test]
    fn clamps_out_of_range() {
        let s = EmotionScores::clamped([1.5, -0.2, f64::NAN, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.get(Emotion::Anger), 1.0);
        assert_eq!(s.get(Emotion::Anticipation), 0.0);
        assert_eq!(s.get(Emotion::Disgust), 0.0);
    }

    #[test]
    fn emotion_names_round_trip() {
        for e in Emotion::ALL {
            assert_eq!(e.name().parse::<Emotion>().unwrap(), e);
            assert_eq!(Affect::from(e).emotion(), Some(e));
        }
        assert!("love".parse::<Emotion>().is_err());
    }

    fn scores() -> impl Strategy<Value = [f64; 8]> {
        prop::array::uniform8(0.0f64..=1.0)
    }

    proptest! {
        #[test]
        fn neutral_iff_empty_predominant(v in scores(), t in 0.0f64..=1.0) {
            let p = EmotionProfile::from_scores(EmotionScores::clamped(v), t);
            prop_assert_eq!(p.neutral, p.predominant.is_empty());
            for w in p.predominant.windows(2) {
                prop_assert!(p.score(w[0]) >= p.score(w[1]));
            }
            for e in Emotion::ALL {
                prop_assert_eq!(p.predominant.contains(&e), p.score(e) >= t);
            }
        }

        #[test]
        fn raising_a_score_keeps_it_predominant(v in scores(), t in 0.0f64..=1.0, i in 0usize..8, bump in 0.0f64..=1.0) {
            let base = EmotionScores::clamped(v);
            let e = Emotion::ALL[i];
            let raised = base.with(e, base.get(e) + bump);
            if predominant(&base, t).contains(&e) {
                prop_assert!(predominant(&raised, t).contains(&e));
            }
        }
    }
}
