//! Advance-width measurement.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{TypefaceDef, STRETCH_AXIS, WEIGHT_AXIS};

use super::FontState;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("no font resource for typeface `{0}`")]
    FontResourceMissing(String),
    #[error("cannot read font {path}: {reason}")]
    FontUnreadable { path: PathBuf, reason: String },
}

/// Width of a run of text, in points, for a typeface in a given state.
///
/// Implementations must be read-only after construction. Width is
/// non-decreasing in size and stretch, zero for the empty string, and never
/// smaller for a concatenation than for either part.
pub trait TextMeasurer: Send + Sync {
    fn width(&self, text: &str, state: &FontState, typeface: &TypefaceDef) -> Result<f64, MeasureError>;
}

/// Advance of one character in em units for the synthetic measurer.
pub fn unit_advance(c: char) -> f64 {
    match c {
        ' ' => 0.28,
        'i' | 'l' | 'j' | 'I' | '.' | ',' | ';' | ':' | '\'' | '!' | '|' | '’' => 0.26,
        'f' | 't' | 'r' | '(' | ')' | '[' | ']' | '-' | '"' => 0.36,
        'm' | 'w' | 'M' | 'W' => 0.86,
        c if c.is_ascii_uppercase() => 0.68,
        c if c.is_ascii_digit() => 0.56,
        c if c.is_ascii_lowercase() => 0.54,
        c if c.is_alphabetic() => 0.56,
        c if c.is_whitespace() => 0.28,
        _ => 1.0,
    }
}

/// Font-free measurer:
/// `size * stretch/100 * sum(unit advances) * advance_scale * (1 + 0.0005 (weight - 400))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SyntheticMeasurer;

impl SyntheticMeasurer {
    pub fn measure(text: &str, state: &FontState, typeface: &TypefaceDef) -> f64 {
        let units: f64 = text.chars().map(unit_advance).sum();
        let stretch = state.axis(STRETCH_AXIS).unwrap_or(100.0);
        let weight = state.axis(WEIGHT_AXIS).unwrap_or(400.0);
        state.size * (stretch / 100.0) * units * typeface.advance_scale * (1.0 + 0.0005 * (weight - 400.0))
    }
}

impl TextMeasurer for SyntheticMeasurer {
    fn width(&self, text: &str, state: &FontState, typeface: &TypefaceDef) -> Result<f64, MeasureError> {
        Ok(Self::measure(text, state, typeface))
    }
}

/// Measures with glyph advances read from font files, applying variation
/// coordinates when the font has the axis. A `wdth` value the font cannot
/// express scales the width linearly.
#[derive(Debug, Clone, Default)]
pub struct FontMeasurer {
    fonts: HashMap<String, Vec<u8>>,
}

impl FontMeasurer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads every typeface that names a `source` file.
    pub fn from_typefaces<'a>(typefaces: impl IntoIterator<Item = &'a TypefaceDef>) -> Result<Self, MeasureError> {
        let mut m = Self::new();
        for tf in typefaces {
            if let Some(path) = &tf.source {
                m.load(&tf.id, path)?;
            }
        }
        Ok(m)
    }

    pub fn load(&mut self, typeface_id: &str, path: impl AsRef<Path>) -> Result<(), MeasureError> {
        let path = path.as_ref();
        let unreadable = |reason: String| MeasureError::FontUnreadable { path: path.to_path_buf(), reason };
        let data = fs::read(path).map_err(|e| unreadable(e.to_string()))?;
        ttf_parser::Face::parse(&data, 0).map_err(|e| unreadable(e.to_string()))?;
        self.fonts.insert(typeface_id.to_string(), data);
        Ok(())
    }

    pub fn with_font(mut self, typeface_id: &str, path: impl AsRef<Path>) -> Result<Self, MeasureError> {
        self.load(typeface_id, path)?;
        Ok(self)
    }

    pub fn has(&self, typeface_id: &str) -> bool {
        self.fonts.contains_key(typeface_id)
    }
}

impl TextMeasurer for FontMeasurer {
    fn width(&self, text: &str, state: &FontState, typeface: &TypefaceDef) -> Result<f64, MeasureError> {
        let data = self
            .fonts
            .get(&typeface.id)
            .ok_or_else(|| MeasureError::FontResourceMissing(typeface.id.clone()))?;
        let mut face = ttf_parser::Face::parse(data, 0).expect("validated on load");
        let mut linear = 1.0;
        for (tag, value) in &state.axes {
            let Ok(bytes) = <[u8; 4]>::try_from(tag.as_bytes()) else { continue };
            let applied = face.set_variation(ttf_parser::Tag::from_bytes(&bytes), *value as f32).is_some();
            if !applied && tag == STRETCH_AXIS {
                linear *= value / 100.0;
            }
        }
        let upem = f64::from(face.units_per_em());
        let fallback = face.glyph_index('?').and_then(|g| face.glyph_hor_advance(g)).unwrap_or(0);
        let units: u64 = text
            .chars()
            .map(|c| {
                let advance = face.glyph_index(c).and_then(|g| face.glyph_hor_advance(g));
                u64::from(advance.unwrap_or(fallback))
            })
            .sum();
        Ok(state.size * units as f64 / upem * linear)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::StyleConfig;

    const DEJAVU: &str = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf";

    fn state(size: f64, weight: f64, stretch: f64) -> FontState {
        let mut s = FontState::new(size, size / 0.8, Default::default());
        s.axes.insert(WEIGHT_AXIS.into(), weight);
        s.axes.insert(STRETCH_AXIS.into(), stretch);
        s
    }

    fn roboto() -> &'static TypefaceDef {
        StyleConfig::shipped().typeface("roboto_flex").unwrap()
    }

    #[test]
    fn synthetic_matches_per_character_sum() {
        // per-character oracle at default weight/stretch: 10pt * (0.68 + 0.54 + 0.26 + 0.26 + 0.54)
        let w = SyntheticMeasurer::measure("Hello", &state(10.0, 400.0, 100.0), roboto());
        assert!((w - 10.0 * 2.28).abs() < 1e-9);
        assert_eq!(SyntheticMeasurer::measure("", &state(10.0, 400.0, 100.0), roboto()), 0.0);
    }

    #[test]
    fn synthetic_scales_with_axes() {
        let base = SyntheticMeasurer::measure("abc", &state(20.0, 400.0, 100.0), roboto());
        let narrow = SyntheticMeasurer::measure("abc", &state(20.0, 400.0, 50.0), roboto());
        let heavy = SyntheticMeasurer::measure("abc", &state(20.0, 600.0, 100.0), roboto());
        assert!((narrow - base / 2.0).abs() < 1e-9);
        assert!((heavy - base * 1.1).abs() < 1e-9);
    }

    #[test]
    fn real_font_widths() {
        if !Path::new(DEJAVU).exists() {
            return;
        }
        let m = FontMeasurer::new().with_font("roboto_flex", DEJAVU).unwrap();
        let s = state(12.0, 400.0, 100.0);
        let a = m.width("ab", &s, roboto()).unwrap();
        let b = m.width("abab", &s, roboto()).unwrap();
        assert!(a > 0.0);
        assert!((b - 2.0 * a).abs() < 1e-9);
        assert_eq!(m.width("", &s, roboto()).unwrap(), 0.0);
        // DejaVu Sans has no wdth axis, so stretch scales linearly
        let narrow = m.width("ab", &state(12.0, 400.0, 50.0), roboto()).unwrap();
        assert!((narrow - a / 2.0).abs() < 1e-9);
    }

    #[test]
    fn missing_font() {
        let m = FontMeasurer::new();
        assert_eq!(
            m.width("x", &state(12.0, 400.0, 100.0), roboto()),
            Err(MeasureError::FontResourceMissing("roboto_flex".into()))
        );
        assert!(matches!(FontMeasurer::new().with_font("x", "/nonexistent.ttf"), Err(MeasureError::FontUnreadable { .. })));
    }
}
