//! Background styles and their colour rules.
//!
//! New styles are added here: a variant on [`BackgroundSpec`], a tag on
//! [`BackgroundStyle`], and a builder arm in [`build_background`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{roulette_select, select_colour, BackgroundStyle, StyleError};
use crate::colour::{contrast_ratio, Rgb};
use crate::config::{BandFractions, StyleConfig};
use crate::emotion::{Emotion, EmotionProfile};

/// Colour redraws before falling back to a neutral foreground.
pub const MAX_REDRAWS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagonal {
    /// Split from the top-left to the bottom-right corner.
    Falling,
    /// Split from the bottom-left to the top-right corner.
    Rising,
}

/// A horizontal band, stacked top to bottom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub colour: Rgb,
    pub height_fraction: f64,
    /// Where the fade to white ends, as a fraction of the poster height.
    /// Only set on a single full-height gradient band.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_point_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "snake_case")]
pub enum BackgroundSpec {
    Solid {
        bg: Rgb,
        fg: Rgb,
    },
    /// `triangle_a` is the half touching the top edge.
    DiagonallyHalved {
        triangle_a: Rgb,
        triangle_b: Rgb,
        diagonal: Diagonal,
        fg: Rgb,
    },
    SolidDivided {
        bands: Vec<Band>,
        fg: Rgb,
    },
    Gradient {
        bands: Vec<Band>,
        fg: Rgb,
    },
}

impl BackgroundSpec {
    pub fn style(&self) -> BackgroundStyle {
        match self {
            BackgroundSpec::Solid { .. } => BackgroundStyle::Solid,
            BackgroundSpec::DiagonallyHalved { .. } => BackgroundStyle::DiagonallyHalved,
            BackgroundSpec::SolidDivided { .. } => BackgroundStyle::SolidDivided,
            BackgroundSpec::Gradient { .. } => BackgroundStyle::Gradient,
        }
    }

    pub fn fg(&self) -> Rgb {
        match self {
            BackgroundSpec::Solid { fg, .. }
            | BackgroundSpec::DiagonallyHalved { fg, .. }
            | BackgroundSpec::SolidDivided { fg, .. }
            | BackgroundSpec::Gradient { fg, .. } => *fg,
        }
    }

    pub fn bands(&self) -> &[Band] {
        match self {
            BackgroundSpec::SolidDivided { bands, .. } | BackgroundSpec::Gradient { bands, .. } => bands,
            _ => &[],
        }
    }

    /// Every colour the text may sit on.
    pub fn background_colours(&self) -> Vec<Rgb> {
        match self {
            BackgroundSpec::Solid { bg, .. } => vec![*bg],
            BackgroundSpec::DiagonallyHalved { triangle_a, triangle_b, .. } => vec![*triangle_a, *triangle_b],
            BackgroundSpec::SolidDivided { bands, .. } => bands.iter().map(|b| b.colour).collect(),
            BackgroundSpec::Gradient { bands, .. } => {
                bands.iter().map(|b| b.colour).chain(std::iter::once(Rgb::WHITE)).collect()
            }
        }
    }

    /// Smallest contrast between the text colour and any background colour.
    pub fn min_contrast(&self) -> f64 {
        let fg = self.fg();
        self.background_colours()
            .into_iter()
            .map(|bg| contrast_ratio(fg, bg))
            .fold(f64::INFINITY, f64::min)
    }

    /// Describes the first violated structural invariant, if any.
    pub fn invariant_violation(&self) -> Option<String> {
        let bands = self.bands();
        if matches!(self, BackgroundSpec::SolidDivided { .. } | BackgroundSpec::Gradient { .. }) {
            if bands.is_empty() {
                return Some("no bands".into());
            }
            let sum: f64 = bands.iter().map(|b| b.height_fraction).sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Some(format!("band fractions sum to {sum}"));
            }
            if bands.iter().any(|b| !(b.height_fraction > 0.0 && b.height_fraction <= 1.0)) {
                return Some("band fraction outside (0, 1]".into());
            }
        }
        if let BackgroundSpec::Gradient { bands, .. } = self {
            if bands.len() == 1 {
                match bands[0].end_point_fraction {
                    Some(e) if (0.75..=1.0).contains(&e) => {}
                    other => return Some(format!("single-band end point {other:?} outside [0.75, 1]")),
                }
            } else if bands.iter().any(|b| b.end_point_fraction.is_some()) {
                return Some("end point set on a multi-band gradient".into());
            }
        }
        None
    }
}

fn passing_neutrals(backgrounds: &[Rgb], config: &StyleConfig) -> Vec<Rgb> {
    Rgb::NEUTRALS
        .into_iter()
        .filter(|&n| backgrounds.iter().all(|&bg| contrast_ratio(n, bg) >= config.min_contrast))
        .collect()
}

/// Neutral with the best worst-case contrast; black wins ties.
fn best_neutral(backgrounds: &[Rgb]) -> Rgb {
    let worst = |n: Rgb| backgrounds.iter().map(|&bg| contrast_ratio(n, bg)).fold(f64::INFINITY, f64::min);
    if worst(Rgb::WHITE) > worst(Rgb::BLACK) {
        Rgb::WHITE
    } else {
        Rgb::BLACK
    }
}

/// Uniform choice among neutrals legible on every background colour.
fn pick_neutral<R: Rng + ?Sized>(backgrounds: &[Rgb], rng: &mut R, config: &StyleConfig) -> Option<Rgb> {
    let ok = passing_neutrals(backgrounds, config);
    match ok.len() {
        0 => None,
        1 => Some(ok[0]),
        n => Some(ok[rng.random_range(0..n)]),
    }
}

fn legible(fg: Rgb, bg: Rgb, config: &StyleConfig) -> bool {
    contrast_ratio(fg, bg) >= config.min_contrast
}

/// Probability of using the second emotion's colour: `score2 / score1`.
fn secondary_probability(profile: &EmotionProfile) -> f64 {
    match (profile.primary(), profile.secondary()) {
        (Some(a), Some(b)) if profile.score(a) > 0.0 => (profile.score(b) / profile.score(a)).clamp(0.0, 1.0),
        _ => 0.0,
    }
}

/// Band emotions and their normalized heights.
fn band_layout(profile: &EmotionProfile, config: &StyleConfig) -> Vec<(Emotion, f64)> {
    let emotions: Vec<Emotion> = match config.band_fractions {
        BandFractions::PredominantNormalized => profile.predominant.clone(),
        BandFractions::AllEmotions => {
            let mut all: Vec<Emotion> = Emotion::ALL.into_iter().filter(|&e| profile.score(e) > 0.0).collect();
            all.sort_by(|a, b| profile.score(*b).total_cmp(&profile.score(*a)));
            all
        }
    };
    let total: f64 = emotions.iter().map(|&e| profile.score(e)).sum();
    let mut out: Vec<(Emotion, f64)> = emotions.iter().map(|&e| (e, profile.score(e) / total)).collect();
    // absorb rounding in the last band so the heights sum to exactly one
    if let Some((_, last)) = out.last_mut() {
        let rest: f64 = emotions[..emotions.len() - 1].iter().map(|&e| profile.score(e) / total).sum();
        *last = 1.0 - rest;
    }
    out
}

/// Fills in the colours and geometry of a background style.
pub fn build_background<R: Rng + ?Sized>(
    style: BackgroundStyle,
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<BackgroundSpec, StyleError> {
    let found = profile.predominant.len();
    let Some(primary) = profile.primary() else {
        return match style {
            BackgroundStyle::Solid => Ok(BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK }),
            _ => Err(StyleError::StyleProfileMismatch { style, needed: style.min_emotions(), found }),
        };
    };
    if found < style.min_emotions() {
        return Err(StyleError::StyleProfileMismatch { style, needed: style.min_emotions(), found });
    }

    match style {
        BackgroundStyle::Solid => solid(primary, profile, rng, config),
        BackgroundStyle::DiagonallyHalved => diagonal(primary, profile, rng, config),
        BackgroundStyle::SolidDivided | BackgroundStyle::Gradient => banded(style, profile, rng, config),
    }
}

fn solid<R: Rng + ?Sized>(
    primary: Emotion,
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<BackgroundSpec, StyleError> {
    let row = &config.colours[&primary];
    let mut weights: Vec<f64> = row.iter().map(|c| c.weight).collect();
    let total: f64 = weights.iter().sum();
    let p = config.white_probability;
    let white_weight = if p >= 1.0 {
        weights.iter_mut().for_each(|w| *w = 0.0);
        1.0
    } else {
        p * total / (1.0 - p)
    };
    weights.push(white_weight);
    let pick = roulette_select(&weights, rng)?;
    let bg = if pick == row.len() { Rgb::WHITE } else { row[pick].colour };

    let fg = if bg == Rgb::WHITE {
        let mut found = None;
        for _ in 0..MAX_REDRAWS {
            let c = select_colour(primary, rng, config)?;
            if legible(c, bg, config) {
                found = Some(c);
                break;
            }
        }
        found.unwrap_or(Rgb::BLACK)
    } else {
        let mut found = None;
        if let Some(second) = profile.secondary() {
            if rng.random::<f64>() < secondary_probability(profile) {
                for _ in 0..MAX_REDRAWS {
                    let c = select_colour(second, rng, config)?;
                    if legible(c, bg, config) {
                        found = Some(c);
                        break;
                    }
                }
            }
        }
        match found {
            Some(c) => c,
            None => pick_neutral(&[bg], rng, config).unwrap_or_else(|| best_neutral(&[bg])),
        }
    };
    finish(BackgroundSpec::Solid { bg, fg }, config)
}

fn diagonal<R: Rng + ?Sized>(
    primary: Emotion,
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<BackgroundSpec, StyleError> {
    let diagonal = if rng.random::<bool>() { Diagonal::Falling } else { Diagonal::Rising };
    let primary_on_top = rng.random::<bool>();
    let mut last = None;
    for _ in 0..MAX_REDRAWS {
        let main = select_colour(primary, rng, config)?;
        let other = match profile.secondary() {
            Some(second) if rng.random::<f64>() < secondary_probability(profile) => {
                select_colour(second, rng, config)?
            }
            _ => Rgb::WHITE,
        };
        let (a, b) = if primary_on_top { (main, other) } else { (other, main) };
        if let Some(fg) = pick_neutral(&[a, b], rng, config) {
            return finish(BackgroundSpec::DiagonallyHalved { triangle_a: a, triangle_b: b, diagonal, fg }, config);
        }
        last = Some((a, b));
    }
    let (a, b) = last.expect("at least one draw");
    let fg = best_neutral(&[a, b]);
    finish(BackgroundSpec::DiagonallyHalved { triangle_a: a, triangle_b: b, diagonal, fg }, config)
}

fn banded<R: Rng + ?Sized>(
    style: BackgroundStyle,
    profile: &EmotionProfile,
    rng: &mut R,
    config: &StyleConfig,
) -> Result<BackgroundSpec, StyleError> {
    let layout = band_layout(profile, config);
    let make = |bands: Vec<Band>, fg: Rgb| match style {
        BackgroundStyle::Gradient => BackgroundSpec::Gradient { bands, fg },
        _ => BackgroundSpec::SolidDivided { bands, fg },
    };
    let mut last = None;
    for _ in 0..MAX_REDRAWS {
        let mut bands = Vec::with_capacity(layout.len());
        for &(emotion, fraction) in &layout {
            bands.push(Band { colour: select_colour(emotion, rng, config)?, height_fraction: fraction, end_point_fraction: None });
        }
        if style == BackgroundStyle::Gradient && bands.len() == 1 {
            let score = profile.score(layout[0].0);
            bands[0].end_point_fraction = Some(0.75 + 0.25 * score);
        }
        let spec = make(bands.clone(), Rgb::BLACK);
        if let Some(fg) = pick_neutral(&spec.background_colours(), rng, config) {
            return finish(make(bands, fg), config);
        }
        last = Some(spec);
    }
    let spec = last.expect("at least one draw");
    let fg = best_neutral(&spec.background_colours());
    finish(make(spec.bands().to_vec(), fg), config)
}

fn finish(spec: BackgroundSpec, config: &StyleConfig) -> Result<BackgroundSpec, StyleError> {
    if spec.min_contrast() >= config.min_contrast {
        Ok(spec)
    } else {
        Err(StyleError::LegibilityUnreachable(spec.style()))
    }
}
