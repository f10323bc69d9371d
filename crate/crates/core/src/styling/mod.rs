//! Visual decisions for a poster: format, background, colours, typeface and
//! alignment. Every stochastic choice is a roulette-wheel draw over weights
//! from the style configuration.

pub mod background;
pub mod format;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colour::{contrast_ratio, Rgb};
use crate::config::StyleConfig;
use crate::emotion::{Emotion, EmotionProfile};
pub use background::{build_background, BackgroundSpec, Band, Diagonal};
pub use format::PosterFormat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StyleError {
    #[error("every weight is zero")]
    AllZeroWeights,
    #[error("weights must be finite and non-negative")]
    InvalidWeight,
    #[error("no poster formats configured")]
    EmptyFormatList,
    #[error("unknown poster format `{0}`")]
    UnknownFormat(String),
    #[error("background style `{style}` needs {needed} predominant emotions, profile has {found}")]
    StyleProfileMismatch { style: BackgroundStyle, needed: usize, found: usize },
    #[error("no legible colour combination found for `{0}`")]
    LegibilityUnreachable(BackgroundStyle),
    #[error("no configuration row for `{0}`")]
    MissingRow(String),
}

/// Picks index `i` with probability `weights[i] / sum(weights)`.
pub fn roulette_select<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize, StyleError> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(StyleError::InvalidWeight);
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(StyleError::AllZeroWeights);
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if target < acc {
            return Ok(i);
        }
    }
    // rounding left target at or past the final boundary
    Ok(last)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackgroundStyle {
    Solid,
    DiagonallyHalved,
    SolidDivided,
    Gradient,
}

impl BackgroundStyle {
    pub const ALL: [BackgroundStyle; 4] = [
        BackgroundStyle::Solid,
        BackgroundStyle::DiagonallyHalved,
        BackgroundStyle::SolidDivided,
        BackgroundStyle::Gradient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BackgroundStyle::Solid => "solid",
            BackgroundStyle::DiagonallyHalved => "diagonally_halved",
            BackgroundStyle::SolidDivided => "solid_divided",
            BackgroundStyle::Gradient => "gradient",
        }
    }

    /// Predominant emotions a profile needs for this style.
    pub fn min_emotions(self) -> usize {
        match self {
            BackgroundStyle::SolidDivided => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for BackgroundStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextAlign {
    Left,
    Centre,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxAlign {
    Top,
    Middle,
    Bottom,
}

impl TextAlign {
    pub const ALL: [TextAlign; 3] = [TextAlign::Left, TextAlign::Centre, TextAlign::Right];
}

impl BoxAlign {
    pub const ALL: [BoxAlign; 3] = [BoxAlign::Top, BoxAlign::Middle, BoxAlign::Bottom];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosterStyle {
    pub format: PosterFormat,
    pub background: BackgroundSpec,
    pub typeface: String,
    pub text_align: TextAlign,
    pub box_align: BoxAlign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Legibility {
    pub ratio: f64,
    pub pass: bool,
}

pub fn check_legibility(fg: Rgb, bg: Rgb, config: &StyleConfig) -> Legibility {
    let ratio = contrast_ratio(fg, bg);
    Legibility { ratio, pass: ratio >= config.min_contrast }
}

/// Uniform choice among the configured formats.
pub fn select_format<R: Rng + ?Sized>(rng: &mut R, config: &StyleConfig) -> Result<PosterFormat, StyleError> {
    if config.formats.is_empty() {
        return Err(StyleError::EmptyFormatList);
    }
    let name = &config.formats[rng.random_range(0..config.formats.len())];
    PosterFormat::from_name(name).ok_or_else(|| StyleError::UnknownFormat(name.clone()))
}

/// Draws a background style from the primary emotion's weights. Divided
/// backgrounds are excluded below two predominant emotions; neutral
/// profiles always get a solid background.
pub fn select_background_style<R: Rng + ?Sized>(
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<BackgroundStyle, StyleError> {
    let Some(primary) = profile.primary() else {
        return Ok(BackgroundStyle::Solid);
    };
    let row = config
        .background_weights
        .get(&primary)
        .ok_or_else(|| StyleError::MissingRow(format!("background_weights.{primary}")))?;
    let weights: Vec<f64> = BackgroundStyle::ALL
        .iter()
        .map(|&s| if profile.predominant.len() < s.min_emotions() { 0.0 } else { row.get(s) })
        .collect();
    Ok(BackgroundStyle::ALL[roulette_select(&weights, rng)?])
}

pub fn select_typeface<R: Rng + ?Sized>(
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<String, StyleError> {
    let affect = profile.affect();
    let row = config
        .typeface_map
        .get(&affect)
        .ok_or_else(|| StyleError::MissingRow(format!("typeface_map.{affect}")))?;
    let weights: Vec<f64> = row.iter().map(|w| w.weight).collect();
    Ok(row[roulette_select(&weights, rng)?].typeface.clone())
}

pub fn select_alignments<R: Rng + ?Sized>(rng: &mut R) -> (TextAlign, BoxAlign) {
    let text = TextAlign::ALL[rng.random_range(0..3)];
    let boxed = BoxAlign::ALL[rng.random_range(0..3)];
    (text, boxed)
}

/// Colour drawn from an emotion's palette.
pub(crate) fn select_colour<R: Rng + ?Sized>(
    emotion: Emotion,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<Rgb, StyleError> {
    let row = config
        .colours
        .get(&emotion)
        .ok_or_else(|| StyleError::MissingRow(format!("colours.{emotion}")))?;
    let weights: Vec<f64> = row.iter().map(|c| c.weight).collect();
    Ok(row[roulette_select(&weights, rng)?].colour)
}

/// Runs every styling decision in a fixed order: format, background
/// style, background colours, typeface, alignments.
pub fn style_poster<R: Rng + ?Sized>(
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<PosterStyle, StyleError> {
    let format = select_format(rng, config)?;
    let style = select_background_style(profile, rng, config)?;
    let background = build_background(style, profile, rng, config)?;
    let typeface = select_typeface(profile, rng, config)?;
    let (text_align, box_align) = select_alignments(rng);
    Ok(PosterStyle { format, background, typeface, text_align, box_align })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emotion::EmotionScores;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn frequencies(weights: &[f64], draws: usize, seed: u64) -> Vec<f64> {
        let mut r = rng(seed);
        let mut counts = vec![0usize; weights.len()];
        for _ in 0..draws {
            counts[roulette_select(weights, &mut r).unwrap()] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn single_positive_weight_always_wins() {
        let mut r = rng(0);
        for _ in 0..1000 {
            assert_eq!(roulette_select(&[1.0, 0.0, 0.0], &mut r), Ok(0));
            assert_eq!(roulette_select(&[0.0, 0.0, 2.5], &mut r), Ok(2));
        }
    }

    #[test]
    fn zero_and_invalid_weights() {
        let mut r = rng(0);
        assert_eq!(roulette_select(&[0.0, 0.0], &mut r), Err(StyleError::AllZeroWeights));
        assert_eq!(roulette_select(&[], &mut r), Err(StyleError::AllZeroWeights));
        assert_eq!(roulette_select(&[1.0, -1.0], &mut r), Err(StyleError::InvalidWeight));
        assert_eq!(roulette_select(&[f64::NAN], &mut r), Err(StyleError::InvalidWeight));
    }

    #[test]
    fn even_weights_split_evenly() {
        let f = frequencies(&[1.0, 1.0], 10_000, 42);
        assert!((f[0] - 0.5).abs() < 0.02, "{f:?}");
        // chi-square with one degree of freedom, 99.9% critical value 10.83
        let n = 10_000.0;
        let chi: f64 = f.iter().map(|p| (p * n - n / 2.0).powi(2) / (n / 2.0)).sum();
        assert!(chi < 10.83, "chi-square {chi}");
    }

    #[test]
    fn frequencies_follow_weights() {
        let w = [1.0, 2.0, 3.0, 4.0];
        let f = frequencies(&w, 50_000, 7);
        for (p, w) in f.iter().zip(w) {
            assert!((p - w / 10.0).abs() < 0.01, "{f:?}");
        }
    }

    #[test]
    fn power_of_two_scaling_repeats_draws() {
        let w = [0.3, 1.7, 0.0, 2.2];
        let scaled: Vec<f64> = w.iter().map(|x| x * 8.0).collect();
        let (mut a, mut b) = (rng(5), rng(5));
        for _ in 0..5_000 {
            assert_eq!(roulette_select(&w, &mut a), roulette_select(&scaled, &mut b));
        }
    }

    #[test]
    fn format_lookup() {
        let mut cfg = StyleConfig::shipped().clone();
        cfg.formats = vec!["A4".into()];
        let f = select_format(&mut rng(1), &cfg).unwrap();
        assert_eq!((f.width_mm, f.height_mm), (210, 297));
        cfg.formats.clear();
        assert_eq!(select_format(&mut rng(1), &cfg), Err(StyleError::EmptyFormatList));
    }

    #[test]
    fn formats_are_uniform() {
        let mut cfg = StyleConfig::shipped().clone();
        cfg.formats = vec!["A3".into(), "B4".into(), "C2".into()];
        let mut r = rng(99);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..10_000 {
            *counts.entry(select_format(&mut r, &cfg).unwrap().name).or_insert(0usize) += 1;
        }
        for (name, c) in counts {
            assert!((c as f64 / 10_000.0 - 1.0 / 3.0).abs() < 0.02, "{name}: {c}");
        }
    }

    #[test]
    fn neutral_profile_gets_solid() {
        let p = EmotionProfile::neutral();
        let mut r = rng(3);
        for _ in 0..100 {
            assert_eq!(select_background_style(&p, &mut r, StyleConfig::shipped()), Ok(BackgroundStyle::Solid));
        }
    }

    #[test]
    fn two_emotion_equal_weights_are_uniform() {
        let mut cfg = StyleConfig::shipped().clone();
        for row in cfg.background_weights.values_mut() {
            *row = crate::config::BackgroundWeights { solid: 1.0, diagonally_halved: 1.0, solid_divided: 1.0, gradient: 1.0 };
        }
        let scores = EmotionScores::zero().with(Emotion::Joy, 0.7).with(Emotion::Trust, 0.5);
        let p = EmotionProfile::from_scores(scores, 0.3);
        let mut r = rng(21);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            let s = select_background_style(&p, &mut r, &cfg).unwrap();
            counts[BackgroundStyle::ALL.iter().position(|&x| x == s).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / 10_000.0 - 0.25).abs() < 0.02, "{counts:?}");
        }
    }

    #[test]
    fn typeface_rows() {
        let mut cfg = StyleConfig::shipped().clone();
        let p = EmotionProfile::from_scores(EmotionScores::zero().with(Emotion::Fear, 0.9), 0.3);
        cfg.typeface_map.get_mut(&crate::emotion::Affect::Fear).unwrap().truncate(1);
        let only = cfg.typeface_map[&crate::emotion::Affect::Fear][0].typeface.clone();
        let mut r = rng(4);
        for _ in 0..200 {
            assert_eq!(select_typeface(&p, &mut r, &cfg).unwrap(), only);
        }
        cfg.typeface_map.get_mut(&crate::emotion::Affect::Fear).unwrap()[0].weight = 0.0;
        assert_eq!(select_typeface(&p, &mut r, &cfg), Err(StyleError::AllZeroWeights));
    }

    #[test]
    fn typeface_frequencies() {
        let cfg = StyleConfig::shipped();
        let row = &cfg.typeface_map[&crate::emotion::Affect::Neutral];
        let total: f64 = row.iter().map(|w| w.weight).sum();
        let p = EmotionProfile::neutral();
        let mut r = rng(8);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..20_000 {
            *counts.entry(select_typeface(&p, &mut r, cfg).unwrap()).or_insert(0usize) += 1;
        }
        for w in row {
            let f = counts.get(&w.typeface).copied().unwrap_or(0) as f64 / 20_000.0;
            assert!((f - w.weight / total).abs() < 0.02, "{}: {f}", w.typeface);
        }
    }

    #[test]
    fn alignments_are_seeded_and_uniform() {
        assert_eq!(select_alignments(&mut rng(10)), select_alignments(&mut rng(10)));
        let mut r = rng(77);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..18_000 {
            *counts.entry(select_alignments(&mut r)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 9);
        for c in counts.values() {
            assert!((*c as f64 / 18_000.0 - 1.0 / 9.0).abs() < 0.02);
        }
        let distinct: std::collections::HashSet<_> =
            (0..20).map(|s| select_alignments(&mut rng(s))).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn legibility_examples() {
        let cfg = StyleConfig::shipped();
        let bw = check_legibility(Rgb::BLACK, Rgb::WHITE, cfg);
        assert!((bw.ratio - 21.0).abs() < 1e-9 && bw.pass);
        let c = Rgb(0x12, 0x7c, 0x9f);
        let same = check_legibility(c, c, cfg);
        assert!((same.ratio - 1.0).abs() < 1e-12 && !same.pass);
    }
}
