//! SVG serialization of a styled, composed poster.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::colour::Rgb;
use crate::config::StyleConfig;
use crate::styling::background::{Band, BackgroundSpec, Diagonal};
use crate::styling::{PosterStyle, TextAlign};
use crate::typesetter::Composition;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("no font resource for typeface `{0}`")]
    FontResourceMissing(String),
    #[error("unknown typeface `{0}`")]
    UnknownTypeface(String),
    #[error("cannot write poster: {0}")]
    Io(#[from] std::io::Error),
    #[cfg(feature = "png")]
    #[error("rasterization failed: {0}")]
    Raster(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub dpi: f64,
    /// Reference the typeface's font file from the document. Fails with
    /// `FontResourceMissing` when the file is not configured or absent.
    pub embed_font: bool,
}

impl RenderOptions {
    pub fn from_config(config: &StyleConfig) -> Self {
        Self { dpi: config.dpi, embed_font: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosterDocument {
    pub svg: String,
    pub width_px: f64,
    pub height_px: f64,
}

/// `{id}_{seed}.svg`
pub fn poster_file_name(id: &str, seed: u64) -> String {
    format!("{id}_{seed}.svg")
}

impl PosterDocument {
    pub fn write_to(&self, dir: impl AsRef<Path>, id: &str, seed: u64) -> Result<PathBuf, RenderError> {
        fs::create_dir_all(&dir)?;
        let path = dir.as_ref().join(poster_file_name(id, seed));
        fs::write(&path, &self.svg)?;
        Ok(path)
    }

    /// PNG at the document's pixel size, using system fonts.
    #[cfg(feature = "png")]
    pub fn to_png(&self) -> Result<Vec<u8>, RenderError> {
        use resvg::{tiny_skia, usvg};
        let mut opt = usvg::Options::default();
        opt.fontdb_mut().load_system_fonts();
        let tree = usvg::Tree::from_str(&self.svg, &opt).map_err(|e| RenderError::Raster(e.to_string()))?;
        let (w, h) = (self.width_px.round() as u32, self.height_px.round() as u32);
        let mut pixmap = tiny_skia::Pixmap::new(w, h).ok_or_else(|| RenderError::Raster("empty canvas".into()))?;
        let scale = w as f32 / tree.size().width();
        resvg::render(&tree, tiny_skia::Transform::from_scale(scale, scale), &mut pixmap.as_mut());
        pixmap.encode_png().map_err(|e| RenderError::Raster(e.to_string()))
    }
}

/// Compact fixed-precision number formatting, stable across runs.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn rect(out: &mut String, x: f64, y: f64, w: f64, h: f64, fill: &str) {
    let _ = writeln!(out, r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#, num(x), num(y), num(w), num(h));
}

fn polygon(out: &mut String, points: [(f64, f64); 3], fill: Rgb) {
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
    let _ = writeln!(out, r#"  <polygon points="{}" fill="{}"/>"#, pts.join(" "), fill.to_hex());
}

fn gradient_defs(out: &mut String, bands: &[Band]) {
    let _ = writeln!(out, r#"  <defs>"#);
    let _ = writeln!(out, r#"    <linearGradient id="bg" x1="0" y1="0" x2="0" y2="1">"#);
    let stop = |out: &mut String, offset: f64, colour: Rgb| {
        let _ = writeln!(out, r#"      <stop offset="{}" stop-color="{}"/>"#, num(offset), colour.to_hex());
    };
    if let [band] = bands {
        stop(out, 0.0, band.colour);
        stop(out, band.end_point_fraction.unwrap_or(1.0), Rgb::WHITE);
    } else {
        // one stop at the middle of each band
        let mut start = 0.0;
        for band in bands {
            stop(out, start + band.height_fraction / 2.0, band.colour);
            start += band.height_fraction;
        }
    }
    let _ = writeln!(out, r#"    </linearGradient>"#);
    let _ = writeln!(out, r#"  </defs>"#);
}

fn background(out: &mut String, spec: &BackgroundSpec, w: f64, h: f64) {
    match spec {
        BackgroundSpec::Solid { bg, .. } => rect(out, 0.0, 0.0, w, h, &bg.to_hex()),
        BackgroundSpec::DiagonallyHalved { triangle_a, triangle_b, diagonal, .. } => match diagonal {
            Diagonal::Falling => {
                polygon(out, [(0.0, 0.0), (w, 0.0), (w, h)], *triangle_a);
                polygon(out, [(0.0, 0.0), (w, h), (0.0, h)], *triangle_b);
            }
            Diagonal::Rising => {
                polygon(out, [(0.0, 0.0), (w, 0.0), (0.0, h)], *triangle_a);
                polygon(out, [(w, 0.0), (w, h), (0.0, h)], *triangle_b);
            }
        },
        BackgroundSpec::SolidDivided { bands, .. } => {
            let mut y = 0.0;
            for band in bands {
                rect(out, 0.0, y * h, w, band.height_fraction * h, &band.colour.to_hex());
                y += band.height_fraction;
            }
        }
        BackgroundSpec::Gradient { bands, .. } => {
            gradient_defs(out, bands);
            rect(out, 0.0, 0.0, w, h, "#ffffff");
            rect(out, 0.0, 0.0, w, h, "url(#bg)");
        }
    }
}

/// Serializes the poster as a standalone SVG 1.1 document whose user units
/// are points and whose physical size follows the DPI.
pub fn render(
    style: &PosterStyle,
    composition: &Composition,
    config: &StyleConfig,
    options: &RenderOptions,
) -> Result<PosterDocument, RenderError> {
    let typeface = config
        .typeface(&style.typeface)
        .ok_or_else(|| RenderError::UnknownTypeface(style.typeface.clone()))?;
    let font_file = if options.embed_font {
        match &typeface.source {
            Some(p) if p.exists() => Some(p.clone()),
            _ => return Err(RenderError::FontResourceMissing(typeface.id.clone())),
        }
    } else {
        None
    };

    let (w, h) = (style.format.width_pt(), style.format.height_pt());
    let width_px = f64::from(style.format.width_mm) / 25.4 * options.dpi;
    let height_px = f64::from(style.format.height_mm) / 25.4 * options.dpi;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width_px),
        num(height_px),
        num(w),
        num(h)
    );
    if let Some(path) = font_file {
        let _ = writeln!(
            out,
            "  <style type=\"text/css\">@font-face {{ font-family: '{}'; src: url('{}'); }}</style>",
            escape(&typeface.family),
            escape(&path.display().to_string())
        );
    }
    background(&mut out, &style.background, w, h);

    let anchor = match style.text_align {
        TextAlign::Left => "start",
        TextAlign::Centre => "middle",
        TextAlign::Right => "end",
    };
    let variations: Vec<String> = composition
        .state
        .axes
        .iter()
        .map(|(tag, v)| format!("'{}' {}", tag, num(*v)))
        .collect();
    let mut text_style = String::new();
    if !variations.is_empty() {
        let _ = write!(text_style, " style=\"font-variation-settings: {}\"", variations.join(", "));
    }
    let fg = style.background.fg().to_hex();
    let _ = writeln!(
        out,
        r#"  <g font-family="{}" font-size="{}" fill="{fg}" text-anchor="{anchor}"{text_style}>"#,
        escape(&typeface.family),
        num(composition.state.size)
    );
    for line in &composition.lines {
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}">{}</text>"#,
            num(line.anchor_x(style.text_align)),
            num(line.baseline),
            escape(&line.text)
        );
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(PosterDocument { svg: out, width_px, height_px })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::LinePlan;
    use crate::styling::{BoxAlign, PosterFormat};
    use crate::typesetter::{typeset, SyntheticMeasurer};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poster(background: BackgroundSpec, lines: &[&str]) -> (PosterStyle, Composition) {
        let style = PosterStyle {
            format: PosterFormat::from_name("A3").unwrap(),
            background,
            typeface: "roboto_flex".into(),
            text_align: TextAlign::Centre,
            box_align: BoxAlign::Middle,
        };
        let plan = LinePlan::from_lines(lines.iter().map(|s| s.to_string()).collect());
        let c = typeset(&plan, &style, StyleConfig::shipped(), &mut ChaCha8Rng::seed_from_u64(0), &SyntheticMeasurer)
            .unwrap();
        (style, c)
    }

    fn opts() -> RenderOptions {
        RenderOptions::from_config(StyleConfig::shipped())
    }

    #[test]
    fn neutral_poster() {
        let (style, c) = poster(BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK }, &["calm <day> & night"]);
        let doc = render(&style, &c, StyleConfig::shipped(), &opts()).unwrap();
        assert!(doc.svg.contains(r##"fill="#ffffff""##));
        assert!(doc.svg.contains(r##"fill="#000000""##));
        assert!(doc.svg.contains("calm &lt;day&gt; &amp; night"));
        assert!(doc.svg.contains("font-variation-settings: 'wdth'"));
    }

    #[test]
    fn single_band_gradient_end_point() {
        let band = Band { colour: "#e21919".parse().unwrap(), height_fraction: 1.0, end_point_fraction: Some(0.9) };
        let (style, c) = poster(BackgroundSpec::Gradient { bands: vec![band], fg: Rgb::BLACK }, &["hi"]);
        let doc = render(&style, &c, StyleConfig::shipped(), &opts()).unwrap();
        assert!(doc.svg.contains(r##"<stop offset="0.9" stop-color="#ffffff"/>"##));
    }

    #[test]
    fn size_follows_dpi() {
        let (style, c) = poster(BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK }, &["x"]);
        let doc = render(&style, &c, StyleConfig::shipped(), &RenderOptions { dpi: 25.4, embed_font: false }).unwrap();
        assert!((doc.width_px - 297.0).abs() < 1e-9 && (doc.height_px - 420.0).abs() < 1e-9);
    }

    #[test]
    fn missing_font_file() {
        let (style, c) = poster(BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK }, &["x"]);
        let e = render(&style, &c, StyleConfig::shipped(), &RenderOptions { dpi: 96.0, embed_font: true });
        assert!(matches!(e, Err(RenderError::FontResourceMissing(id)) if id == "roboto_flex"));
    }

    #[test]
    fn deterministic_bytes() {
        let (style, c) = poster(BackgroundSpec::Solid { bg: Rgb::WHITE, fg: Rgb::BLACK }, &["same", "again"]);
        let a = render(&style, &c, StyleConfig::shipped(), &opts()).unwrap();
        let b = render(&style, &c, StyleConfig::shipped(), &opts()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.1234567), "0.123457");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(poster_file_name("t1", 7), "t1_7.svg");
    }
}
