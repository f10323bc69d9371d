//! Style configuration: the JSON files that parameterize every stage.
//!
//! A configuration is split over several files (the shipped set is
//! `colours.json`, `typefaces.json` and `music.json`). Each file holds a
//! subset of the top-level keys of [`StyleConfig`]; the files are merged and
//! then decoded strictly, so unknown keys and unknown emotion names are
//! errors. A key may appear in only one file.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::colour::{contrast_ratio, Rgb};
use crate::emotion::{Affect, Emotion};
use crate::essys::MusicConfig;
use crate::styling::format::PosterFormat;
use crate::styling::BackgroundStyle;

/// File names of the shipped configuration set, in load order.
pub const CONFIG_FILES: [&str; 3] = ["colours.json", "typefaces.json", "music.json"];

const SHIPPED: [(&str, &str); 3] = [
    ("colours.json", include_str!("../../../config/colours.json")),
    ("typefaces.json", include_str!("../../../config/typefaces.json")),
    ("music.json", include_str!("../../../config/music.json")),
];

pub const WEIGHT_AXIS: &str = "wght";
pub const STRETCH_AXIS: &str = "wdth";
pub const WEIGHT_STEP: f64 = 10.0;
pub const STRETCH_STEP: f64 = 16.6;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error in {file} at {location}: {message}")]
    Parse { file: String, location: String, message: String },
    #[error("invalid config at `{field}`: {reason}")]
    Validation { field: String, reason: String },
}

impl ConfigError {
    fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Validation { field: field.into(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleConfig {
    /// Candidate colours per emotion.
    pub colours: BTreeMap<Emotion, Vec<WeightedColour>>,
    /// Background style weights per predominant emotion.
    pub background_weights: BTreeMap<Emotion, BackgroundWeights>,
    #[serde(default = "default_white_probability")]
    pub white_probability: f64,
    /// Minimum foreground/background contrast ratio.
    #[serde(default = "default_min_contrast")]
    pub min_contrast: f64,
    #[serde(default)]
    pub band_fractions: BandFractions,
    pub typefaces: Vec<TypefaceDef>,
    pub typeface_map: BTreeMap<Affect, Vec<WeightedTypeface>>,
    #[serde(default = "default_threshold")]
    pub predominance_threshold: f64,
    #[serde(default)]
    pub line_division: LineDivision,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
    #[serde(default = "default_dpi")]
    pub dpi: f64,
    #[serde(default)]
    pub layout: LayoutConfig,
    pub music: MusicConfig,
}

fn default_white_probability() -> f64 {
    0.10
}
fn default_min_contrast() -> f64 {
    3.0
}
fn default_threshold() -> f64 {
    0.30
}
fn default_formats() -> Vec<String> {
    ["A2", "A3", "A4", "B3", "B4", "C3", "C4"].map(String::from).to_vec()
}
fn default_dpi() -> f64 {
    96.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedColour {
    pub colour: Rgb,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedTypeface {
    pub typeface: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundWeights {
    pub solid: f64,
    pub diagonally_halved: f64,
    pub solid_divided: f64,
    pub gradient: f64,
}

impl BackgroundWeights {
    pub fn get(&self, style: BackgroundStyle) -> f64 {
        match style {
            BackgroundStyle::Solid => self.solid,
            BackgroundStyle::DiagonallyHalved => self.diagonally_halved,
            BackgroundStyle::SolidDivided => self.solid_divided,
            BackgroundStyle::Gradient => self.gradient,
        }
    }
}

/// Which emotions contribute bands to divided and gradient backgrounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandFractions {
    /// One band per predominant emotion, heights normalized over their scores.
    #[default]
    PredominantNormalized,
    /// One band per emotion with a non-zero score, normalized over all scores.
    AllEmotions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDivision {
    pub min_words: usize,
    pub max_words: usize,
    /// Words up to this many characters should not end a line.
    pub small_word_max_chars: usize,
}

impl Default for LineDivision {
    fn default() -> Self {
        Self { min_words: 3, max_words: 7, small_word_max_chars: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    /// Left and right margin, each as a fraction of the poster width.
    #[serde(default = "default_margin")]
    pub horizontal_margin_fraction: f64,
    #[serde(default = "default_attempt_cap")]
    pub attempt_cap: u32,
}

fn default_margin() -> f64 {
    0.05
}
fn default_attempt_cap() -> u32 {
    1000
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self { horizontal_margin_fraction: default_margin(), attempt_cap: default_attempt_cap() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypefaceDef {
    pub id: String,
    /// CSS font-family used when rendering.
    pub family: String,
    /// Font file for real metrics; `None` means synthetic metrics only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<PathBuf>,
    /// Variation axes by OpenType tag. Empty for static typefaces.
    #[serde(default)]
    pub axes: BTreeMap<String, AxisDef>,
    /// `size = leading * leading_to_size_factor`.
    pub leading_to_size_factor: f64,
    pub size_decrement: SizeDecrement,
    /// Smallest allowed row height (leading), in points.
    pub min_row_height: f64,
    /// Scales the unit advances of the synthetic measurer.
    #[serde(default = "default_advance_scale")]
    pub advance_scale: f64,
}

fn default_advance_scale() -> f64 {
    1.0
}

impl TypefaceDef {
    pub fn is_variable(&self) -> bool {
        self.axes.values().any(|a| a.max > a.min)
    }

    /// Decrement applied by the size modifier after `attempts` operations.
    pub fn decrement_at(&self, attempts: u32) -> f64 {
        self.size_decrement.base + self.size_decrement.per_attempt_slope * f64::from(attempts)
    }

    /// Step of one axis-modifier application on `tag`.
    pub fn axis_step(&self, tag: &str) -> Option<f64> {
        match tag {
            WEIGHT_AXIS => Some(WEIGHT_STEP),
            STRETCH_AXIS => Some(STRETCH_STEP),
            _ => self.axes.get(tag).and_then(|a| a.step),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDef {
    pub default: f64,
    pub min: f64,
    pub max: f64,
    /// Decrement per modification. Fixed for `wght` and `wdth`; required
    /// for any other axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeDecrement {
    pub base: f64,
    pub per_attempt_slope: f64,
}

impl StyleConfig {
    /// The configuration shipped in `config/`, compiled into the crate.
    pub fn shipped() -> &'static StyleConfig {
        use std::sync::OnceLock;
        static SHIPPED_CONFIG: OnceLock<StyleConfig> = OnceLock::new();
        SHIPPED_CONFIG.get_or_init(|| {
            let docs = SHIPPED.iter().map(|(name, text)| (name.to_string(), text.as_bytes()));
            load_from_docs(docs).expect("shipped configuration is valid")
        })
    }

    /// Decodes and validates one merged JSON document.
    pub fn from_json_str(text: &str) -> Result<StyleConfig, ConfigError> {
        load_from_docs(std::iter::once(("<string>".to_string(), text.as_bytes())))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn typeface(&self, id: &str) -> Option<&TypefaceDef> {
        self.typefaces.iter().find(|t| t.id == id)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let weights_ok = |w: f64| w.is_finite() && w >= 0.0;

        for e in Emotion::ALL {
            let Some(row) = self.colours.get(&e) else {
                return Err(ConfigError::validation(format!("colours.{e}"), "missing emotion"));
            };
            for (i, c) in row.iter().enumerate() {
                if !weights_ok(c.weight) {
                    return Err(ConfigError::validation(format!("colours.{e}[{i}].weight"), "must be finite and >= 0"));
                }
                let best = Rgb::NEUTRALS.map(|n| contrast_ratio(c.colour, n)).into_iter().fold(0.0, f64::max);
                if best < self.min_contrast {
                    return Err(ConfigError::validation(
                        format!("colours.{e}[{i}].colour"),
                        format!("{} is not legible against black or white", c.colour),
                    ));
                }
            }
            if !row.iter().any(|c| c.weight > 0.0) {
                return Err(ConfigError::validation(format!("colours.{e}"), "no colour has a positive weight"));
            }

            let Some(bg) = self.background_weights.get(&e) else {
                return Err(ConfigError::validation(format!("background_weights.{e}"), "missing emotion"));
            };
            for style in BackgroundStyle::ALL {
                if !weights_ok(bg.get(style)) {
                    return Err(ConfigError::validation(
                        format!("background_weights.{e}.{}", style.name()),
                        "must be finite and >= 0",
                    ));
                }
            }
            // single-emotion profiles cannot use solid_divided
            if bg.solid + bg.diagonally_halved + bg.gradient <= 0.0 {
                return Err(ConfigError::validation(
                    format!("background_weights.{e}"),
                    "needs a positive weight on a style other than solid_divided",
                ));
            }
        }

        if !(0.0..=1.0).contains(&self.white_probability) {
            return Err(ConfigError::validation("white_probability", "must lie in [0, 1]"));
        }
        if !(self.min_contrast.is_finite() && (1.0..=21.0).contains(&self.min_contrast)) {
            return Err(ConfigError::validation("min_contrast", "must lie in [1, 21]"));
        }
        if !(0.0..=1.0).contains(&self.predominance_threshold) {
            return Err(ConfigError::validation("predominance_threshold", "must lie in [0, 1]"));
        }
        let ld = self.line_division;
        if ld.min_words < 1 {
            return Err(ConfigError::validation("line_division.min_words", "must be at least 1"));
        }
        if ld.max_words < ld.min_words {
            return Err(ConfigError::validation("line_division.max_words", "must be >= min_words"));
        }
        for (i, name) in self.formats.iter().enumerate() {
            if PosterFormat::from_name(name).is_none() {
                return Err(ConfigError::validation(format!("formats[{i}]"), format!("unknown ISO format `{name}`")));
            }
        }
        if !(self.dpi.is_finite() && self.dpi > 0.0) {
            return Err(ConfigError::validation("dpi", "must be positive"));
        }
        let m = self.layout.horizontal_margin_fraction;
        if !(0.0..0.5).contains(&m) {
            return Err(ConfigError::validation("layout.horizontal_margin_fraction", "must lie in [0, 0.5)"));
        }
        if self.layout.attempt_cap == 0 {
            return Err(ConfigError::validation("layout.attempt_cap", "must be positive"));
        }

        let mut ids = BTreeSet::new();
        for (i, t) in self.typefaces.iter().enumerate() {
            if !ids.insert(t.id.as_str()) {
                return Err(ConfigError::validation(format!("typefaces[{i}].id"), format!("duplicate id `{}`", t.id)));
            }
            validate_typeface(t).map_err(|(f, r)| ConfigError::validation(format!("typefaces[{i}].{f}"), r))?;
        }
        for affect in Affect::ALL {
            let Some(row) = self.typeface_map.get(&affect) else {
                return Err(ConfigError::validation(format!("typeface_map.{affect}"), "missing row"));
            };
            for (i, w) in row.iter().enumerate() {
                if !ids.contains(w.typeface.as_str()) {
                    return Err(ConfigError::validation(
                        format!("typeface_map.{affect}[{i}].typeface"),
                        format!("unknown typeface `{}`", w.typeface),
                    ));
                }
                if !weights_ok(w.weight) {
                    return Err(ConfigError::validation(format!("typeface_map.{affect}[{i}].weight"), "must be finite and >= 0"));
                }
            }
            if !row.iter().any(|w| w.weight > 0.0) {
                return Err(ConfigError::validation(format!("typeface_map.{affect}"), "no typeface has a positive weight"));
            }
        }

        if let Some((field, reason)) = self.music.problems().into_iter().next() {
            return Err(ConfigError::validation(field, reason));
        }
        Ok(())
    }
}

fn validate_typeface(t: &TypefaceDef) -> Result<(), (String, String)> {
    let err = |f: &str, r: &str| Err((f.to_string(), r.to_string()));
    if t.id.is_empty() {
        return err("id", "must not be empty");
    }
    if !(t.leading_to_size_factor > 0.0 && t.leading_to_size_factor <= 1.0) {
        return err("leading_to_size_factor", "must lie in (0, 1] so glyphs stay within their row");
    }
    if !(t.size_decrement.base.is_finite() && t.size_decrement.base > 0.0) {
        return err("size_decrement.base", "must be positive");
    }
    if !(t.size_decrement.per_attempt_slope.is_finite() && t.size_decrement.per_attempt_slope >= 0.0) {
        return err("size_decrement.per_attempt_slope", "must be >= 0");
    }
    if !(t.min_row_height.is_finite() && t.min_row_height > 0.0) {
        return err("min_row_height", "must be positive");
    }
    if !(t.advance_scale.is_finite() && t.advance_scale > 0.0) {
        return err("advance_scale", "must be positive");
    }
    for (tag, axis) in &t.axes {
        let field = format!("axes.{tag}");
        if !(axis.min.is_finite() && axis.max.is_finite() && axis.default.is_finite()) {
            return Err((field, "values must be finite".into()));
        }
        if !(axis.min <= axis.default && axis.default <= axis.max) {
            return Err((field, "requires min <= default <= max".into()));
        }
        let (bounds, fixed) = match tag.as_str() {
            WEIGHT_AXIS => (Some((100.0, 950.0)), Some(WEIGHT_STEP)),
            STRETCH_AXIS => (Some((50.0, 200.0)), Some(STRETCH_STEP)),
            _ => (None, None),
        };
        if let Some((lo, hi)) = bounds {
            if axis.min < lo || axis.max > hi {
                return Err((field, format!("bounds must lie within [{lo}, {hi}]")));
            }
        }
        match (fixed, axis.step) {
            (Some(f), Some(s)) if (f - s).abs() > 1e-12 => {
                return Err((format!("{field}.step"), format!("step of `{tag}` is fixed at {f}")));
            }
            (None, None) => return Err((format!("{field}.step"), "required for custom axes".into())),
            (None, Some(s)) if !(s.is_finite() && s > 0.0) => {
                return Err((format!("{field}.step"), "must be positive".into()));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Loads and validates a configuration spread over `paths`.
pub fn load_config<P: AsRef<Path>>(paths: &[P]) -> Result<StyleConfig, ConfigError> {
    let mut docs = Vec::with_capacity(paths.len());
    for p in paths {
        let path = p.as_ref();
        if !path.exists() {
            return Err(ConfigError::MissingFile(path.to_path_buf()));
        }
        let bytes = fs::read(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        docs.push((path.display().to_string(), bytes));
    }
    load_from_docs(docs.iter().map(|(n, b)| (n.clone(), b.as_slice())))
}

/// Loads the standard file set from a directory.
pub fn load_config_dir(dir: impl AsRef<Path>) -> Result<StyleConfig, ConfigError> {
    let dir = dir.as_ref();
    let paths: Vec<PathBuf> = CONFIG_FILES.iter().map(|f| dir.join(f)).collect();
    load_config(&paths)
}

fn load_from_docs<'a>(docs: impl IntoIterator<Item = (String, &'a [u8])>) -> Result<StyleConfig, ConfigError> {
    let mut merged = Map::new();
    for (name, bytes) in docs {
        let value: Value = serde_json::from_slice(bytes).map_err(|e| ConfigError::Parse {
            file: name.clone(),
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let Value::Object(obj) = value else {
            return Err(ConfigError::Parse {
                file: name,
                location: "<root>".into(),
                message: "expected a JSON object".into(),
            });
        };
        for (key, v) in obj {
            if merged.contains_key(&key) {
                return Err(ConfigError::validation(key, format!("defined again in {name}")));
            }
            merged.insert(key, v);
        }
    }
    let config: StyleConfig = serde_path_to_error::deserialize(Value::Object(merged)).map_err(|e| {
        ConfigError::Parse {
            file: "<merged>".into(),
            location: e.path().to_string(),
            message: e.inner().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shipped_json() -> Value {
        serde_json::to_value(StyleConfig::shipped()).unwrap()
    }

    fn load_value(v: Value) -> Result<StyleConfig, ConfigError> {
        StyleConfig::from_json_str(&v.to_string())
    }

    #[test]
    fn shipped_defaults() {
        let c = StyleConfig::shipped();
        assert_eq!(c.white_probability, 0.10);
        assert_eq!(c.predominance_threshold, 0.30);
        assert_eq!(c.min_contrast, 3.0);
        assert_eq!(c.line_division, LineDivision { min_words: 3, max_words: 7, small_word_max_chars: 2 });
        assert_eq!(c.layout.attempt_cap, 1000);
    }

    #[test]
    fn missing_threshold_gets_default() {
        let mut v = shipped_json();
        v.as_object_mut().unwrap().remove("predominance_threshold");
        let c = load_value(v).unwrap();
        assert_eq!(c.predominance_threshold, 0.30);
        // and it survives a serialize/reload cycle
        let again = StyleConfig::from_json_str(&c.to_json_pretty()).unwrap();
        assert_eq!(again.predominance_threshold, 0.30);
        assert_eq!(again, c);
    }

    #[test]
    fn all_zero_colour_weights_rejected() {
        let mut v = shipped_json();
        for c in v["colours"]["joy"].as_array_mut().unwrap() {
            c["weight"] = 0.0.into();
        }
        match load_value(v) {
            Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "colours.joy"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_emotion_key_rejected_with_path() {
        let mut v = shipped_json();
        let joy = v["colours"]["joy"].clone();
        v["colours"].as_object_mut().unwrap().insert("jyo".into(), joy);
        match load_value(v) {
            Err(ConfigError::Parse { location, message, .. }) => {
                assert!(location.starts_with("colours"), "{location}");
                assert!(message.contains("jyo"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_top_level_key_rejected() {
        let mut v = shipped_json();
        v.as_object_mut().unwrap().insert("white_probabilty".into(), 0.2.into());
        assert!(matches!(load_value(v), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn white_probability_range() {
        let mut v = shipped_json();
        v["white_probability"] = 1.5.into();
        assert!(matches!(load_value(v), Err(ConfigError::Validation { field, .. }) if field == "white_probability"));
    }

    #[test]
    fn line_division_bounds() {
        let mut v = shipped_json();
        v["line_division"]["max_words"] = 2.into();
        assert!(matches!(load_value(v), Err(ConfigError::Validation { field, .. }) if field == "line_division.max_words"));
        let mut v = shipped_json();
        v["line_division"]["min_words"] = 0.into();
        assert!(matches!(load_value(v), Err(ConfigError::Validation { field, .. }) if field == "line_division.min_words"));
    }

    #[test]
    fn dangling_typeface_reference() {
        let mut v = shipped_json();
        v["typeface_map"]["fear"][0]["typeface"] = "nope".into();
        match load_value(v) {
            Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "typeface_map.fear[0].typeface"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weight_axis_bounds_enforced() {
        let mut v = shipped_json();
        v["typefaces"][0]["axes"]["wght"]["max"] = 1000.0.into();
        assert!(matches!(load_value(v), Err(ConfigError::Validation { field, .. }) if field == "typefaces[0].axes.wght"));
    }

    #[test]
    fn axis_default_outside_range() {
        let mut v = shipped_json();
        v["typefaces"][0]["axes"]["wdth"]["default"] = 40.0.into();
        assert!(matches!(load_value(v), Err(ConfigError::Validation { .. })));
    }

    #[test]
    fn duplicate_key_across_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        fs::write(&a, r#"{"white_probability": 0.1}"#).unwrap();
        fs::write(&b, r#"{"white_probability": 0.2}"#).unwrap();
        assert!(matches!(load_config(&[a, b]), Err(ConfigError::Validation { .. })));
    }

    #[test]
    fn missing_file() {
        let err = load_config(&["/definitely/not/here.json"]).unwrap_err();
        assert!(matches!(err, ConfigError::MissingFile(_)));
    }

    #[test]
    fn syntax_error_has_location() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("broken.json");
        fs::write(&p, "{\n  \"dpi\": 96,\n  oops\n}").unwrap();
        match load_config(&[&p]) {
            Err(ConfigError::Parse { location, .. }) => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("{other:?}"),
        }
    }
}
