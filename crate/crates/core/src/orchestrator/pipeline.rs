//! One feed item in, one poster and one composition out.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{Analysis, Analyzer, EmotionScorer, IdentityTranslator, ScorerError, Translator, Tweet};
use crate::config::{StyleConfig, STRETCH_AXIS, WEIGHT_AXIS};
use crate::emotion::{Affect, Emotion};
use crate::essys::{self, emit_midi, MusicError};
use crate::renderer::{self, PosterDocument, RenderError, RenderOptions};
use crate::styling::{style_poster, PosterStyle, StyleError};
use crate::typesetter::{typeset, Composition, TextMeasurer, TypesetError};

/// Independent random streams, one per stage, all derived from the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Lines = 1,
    Styling = 2,
    Typesetting = 3,
    Music = 4,
}

pub fn stage_rng(seed: u64, stage: Stage) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage as u64);
    rng
}

/// Mixes a base seed with two indices (splitmix64 finaliser).
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Scorer(#[from] ScorerError),
    #[error(transparent)]
    Style(#[from] StyleError),
    #[error(transparent)]
    Typeset(#[from] TypesetError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Music(#[from] MusicError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, thiserror::Error)]
#[error("item `{id}`: {source}")]
pub struct PipelineError {
    pub id: String,
    #[source]
    pub source: StageError,
}

/// Shared, read-only collaborators for pipeline runs.
pub struct PipelineContext<'a> {
    pub config: &'a StyleConfig,
    pub scorer: &'a dyn EmotionScorer,
    pub translator: &'a dyn Translator,
    pub measurer: &'a dyn TextMeasurer,
    pub render: RenderOptions,
}

impl<'a> PipelineContext<'a> {
    pub fn new(config: &'a StyleConfig, scorer: &'a dyn EmotionScorer, measurer: &'a dyn TextMeasurer) -> Self {
        Self { config, scorer, translator: &IdentityTranslator, measurer, render: RenderOptions::from_config(config) }
    }
}

/// Per-run record for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub id: String,
    pub seed: u64,
    pub chars: usize,
    pub lines: usize,
    pub max_line_chars: usize,
    pub operations: u32,
    pub elapsed_s: f64,
    pub affect: Affect,
    pub format: String,
    pub background: String,
    pub typeface: String,
    pub final_size: f64,
    pub final_weight: Option<f64>,
    pub final_stretch: Option<f64>,
    pub contained: bool,
    pub legible: bool,
}

/// A poster before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub analysis: Analysis,
    pub style: PosterStyle,
    pub composition: Composition,
    pub stats: RunStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub id: String,
    pub seed: u64,
    pub layout: Layout,
    pub poster: PosterDocument,
    pub midi: Vec<u8>,
}

impl PipelineOutput {
    pub fn predominant(&self) -> &[Emotion] {
        &self.layout.analysis.profile.predominant
    }

    pub fn poster_file_name(&self) -> String {
        renderer::poster_file_name(&self.id, self.seed)
    }

    pub fn midi_file_name(&self) -> String {
        format!("{}_{}.mid", self.id, self.seed)
    }

    /// Writes the SVG and, when asked, the MIDI file. Returns the paths.
    pub fn write(&self, dir: &Path, midi: bool) -> Result<Vec<PathBuf>, std::io::Error> {
        fs::create_dir_all(dir)?;
        let mut paths = vec![dir.join(self.poster_file_name())];
        fs::write(&paths[0], &self.poster.svg)?;
        if midi {
            let p = dir.join(self.midi_file_name());
            fs::write(&p, &self.midi)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// Analysis, styling and typesetting, without serialization.
pub fn layout_item(text: &str, lang: Option<&str>, id: &str, ctx: &PipelineContext, seed: u64) -> Result<Layout, StageError> {
    let analyzer = Analyzer { scorer: ctx.scorer, translator: ctx.translator };
    let analysis = analyzer.analyze(text, lang, &mut stage_rng(seed, Stage::Lines), ctx.config)?;
    let style = style_poster(&analysis.profile, &mut stage_rng(seed, Stage::Styling), ctx.config)?;
    let composition = typeset(
        &analysis.plan,
        &style,
        ctx.config,
        &mut stage_rng(seed, Stage::Typesetting),
        ctx.measurer,
    )?;
    let stats = RunStats {
        id: id.to_string(),
        seed,
        chars: analysis.cleaned.chars().count(),
        lines: analysis.plan.len(),
        max_line_chars: analysis.plan.max_line_chars(),
        operations: composition.operations_used,
        elapsed_s: composition.elapsed,
        affect: analysis.profile.affect(),
        format: style.format.name.clone(),
        background: style.background.style().name().to_string(),
        typeface: style.typeface.clone(),
        final_size: composition.state.size,
        final_weight: composition.state.axis(WEIGHT_AXIS),
        final_stretch: composition.state.axis(STRETCH_AXIS),
        contained: composition.contained_in(&style.format),
        legible: style.background.min_contrast() >= ctx.config.min_contrast,
    };
    Ok(Layout { analysis, style, composition, stats })
}

/// Full chain for one item: layout, SVG, and music for the item's
/// predominant emotion.
pub fn run_pipeline(item: &Tweet, ctx: &PipelineContext, seed: u64) -> Result<PipelineOutput, PipelineError> {
    let wrap = |source: StageError| PipelineError { id: item.id.clone(), source };
    let layout = layout_item(&item.text, item.lang.as_deref(), &item.id, ctx, seed).map_err(wrap)?;
    let poster = renderer::render(&layout.style, &layout.composition, ctx.config, &ctx.render)
        .map_err(|e| wrap(e.into()))?;

    let affect = layout.analysis.profile.affect();
    let music = &ctx.config.music;
    let events = essys::generate(affect, music.bars, &mut stage_rng(seed, Stage::Music), music)
        .map_err(|e| wrap(e.into()))?;
    let midi = emit_midi(&events, &music.rows[&affect]);

    Ok(PipelineOutput { id: item.id.clone(), seed, layout, poster, midi })
}
