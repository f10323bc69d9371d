//! Emotion-conditioned ambient music.
//!
//! A probabilistic rule system: every affect has a chord progression, a rule
//! for deriving the melodic scale, and probability tables for melody note
//! kind, duration and melodic leap. The harmony voice plays one chord per
//! bar; the melody voice fills each 4/4 bar note by note, drawing every
//! parameter from its table.

mod smf;
pub mod theory;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::emotion::Affect;
use crate::styling::roulette_select;
pub use smf::{emit_midi, TICKS_PER_QUARTER};
use theory::{Chord, PitchClass, ScaleRule};

pub const BEATS_PER_BAR: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MusicError {
    #[error("bar count must be positive, got {0}")]
    InvalidBarCount(u32),
    #[error("no music row configured for `{0}`")]
    MissingRow(Affect),
    #[error("music row `{0}` has no selectable {1}")]
    DegenerateRow(Affect, &'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MusicConfig {
    /// Bars generated per composition by the pipeline.
    #[serde(default = "default_bars")]
    pub bars: u32,
    pub rows: BTreeMap<Affect, MusicRow>,
}

fn default_bars() -> u32 {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MusicRow {
    pub progression: Vec<Chord>,
    pub scale: ScaleRule,
    pub note_types: NoteTypeProbabilities,
    pub durations: DurationProbabilities,
    /// Signed leaps in scale steps with their weights.
    pub intervals: Vec<IntervalWeight>,
    pub tempo_bpm: f64,
    pub programs: Programs,
    #[serde(default = "default_melody_range")]
    pub melody_range: [u8; 2],
    /// MIDI pitch of C in the octave used for chord voicing.
    #[serde(default = "default_harmony_base")]
    pub harmony_base: u8,
    #[serde(default)]
    pub velocities: Velocities,
}

fn default_melody_range() -> [u8; 2] {
    [60, 84]
}

fn default_harmony_base() -> u8 {
    48
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoteTypeProbabilities {
    pub scale_note: f64,
    pub chord_note: f64,
    pub chromatism: f64,
}

impl NoteTypeProbabilities {
    pub fn get(&self, kind: NoteKind) -> f64 {
        match kind {
            NoteKind::ScaleNote => self.scale_note,
            NoteKind::ChordNote => self.chord_note,
            NoteKind::Chromatism => self.chromatism,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DurationProbabilities {
    pub whole: f64,
    pub half: f64,
    pub quarter: f64,
    pub eighth: f64,
}

impl DurationProbabilities {
    pub fn get(&self, d: NoteValue) -> f64 {
        match d {
            NoteValue::Whole => self.whole,
            NoteValue::Half => self.half,
            NoteValue::Quarter => self.quarter,
            NoteValue::Eighth => self.eighth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalWeight {
    pub step: i32,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Programs {
    pub melody: u8,
    pub harmony: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Velocities {
    pub melody: u8,
    pub harmony: u8,
}

impl Default for Velocities {
    fn default() -> Self {
        Self { melody: 84, harmony: 60 }
    }
}

impl MusicConfig {
    /// Returns `(key path, reason)` for every violated invariant.
    pub fn problems(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if self.bars == 0 {
            out.push(("music.bars".into(), "must be positive".into()));
        }
        for affect in Affect::ALL {
            if !self.rows.contains_key(&affect) {
                out.push((format!("music.rows.{affect}"), "row missing".into()));
            }
        }
        for (affect, row) in &self.rows {
            for (field, reason) in row.problems() {
                out.push((format!("music.rows.{affect}.{field}"), reason));
            }
        }
        out
    }
}

fn check_distribution(values: &[f64]) -> Option<String> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Some("probabilities must be finite and non-negative".into());
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Some(format!("probabilities sum to {sum}, expected 1"));
    }
    None
}

impl MusicRow {
    fn problems(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |f: &str, r: String| out.push((f.to_string(), r));
        if self.progression.is_empty() {
            push("progression", "must contain at least one chord".into());
        }
        let nt = self.note_types;
        if let Some(r) = check_distribution(&[nt.scale_note, nt.chord_note, nt.chromatism]) {
            push("note_types", r);
        }
        let d = self.durations;
        if let Some(r) = check_distribution(&[d.whole, d.half, d.quarter, d.eighth]) {
            push("durations", r);
        }
        if self.intervals.iter().any(|i| !i.weight.is_finite() || i.weight < 0.0) {
            push("intervals", "weights must be finite and non-negative".into());
        } else if !self.intervals.iter().any(|i| i.weight > 0.0) {
            push("intervals", "needs at least one positive weight".into());
        }
        if !(self.tempo_bpm.is_finite() && self.tempo_bpm > 0.0) {
            push("tempo_bpm", "must be positive".into());
        }
        if self.programs.melody > 127 || self.programs.harmony > 127 {
            push("programs", "program numbers are 0..=127".into());
        }
        let [lo, hi] = self.melody_range;
        if lo < 1 || hi > 126 || hi < lo + 12 {
            push("melody_range", "needs 1 <= lo, hi <= 126 and at least one octave".into());
        }
        if self.harmony_base > 115 {
            push("harmony_base", "chord voicing would exceed the MIDI range".into());
        }
        let v = self.velocities;
        if !(1..=127).contains(&v.melody) || !(1..=127).contains(&v.harmony) {
            push("velocities", "velocities are 1..=127".into());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voice {
    Melody,
    Harmony,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoteKind {
    ScaleNote,
    ChordNote,
    Chromatism,
}

impl NoteKind {
    pub const ALL: [NoteKind; 3] = [NoteKind::ScaleNote, NoteKind::ChordNote, NoteKind::Chromatism];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoteValue {
    Whole,
    Half,
    Quarter,
    Eighth,
}

impl NoteValue {
    pub const ALL: [NoteValue; 4] =
        [NoteValue::Whole, NoteValue::Half, NoteValue::Quarter, NoteValue::Eighth];

    pub fn beats(self) -> f64 {
        match self {
            NoteValue::Whole => 4.0,
            NoteValue::Half => 2.0,
            NoteValue::Quarter => 1.0,
            NoteValue::Eighth => 0.5,
        }
    }

    /// Longest note value not exceeding `beats`.
    fn longest_within(beats: f64) -> NoteValue {
        NoteValue::ALL
            .into_iter()
            .find(|v| v.beats() <= beats + 1e-9)
            .unwrap_or(NoteValue::Eighth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoteEvent {
    /// Onset in beats (quarter notes) from the start.
    pub onset: f64,
    /// Duration in beats; one of 4, 2, 1, 0.5.
    pub duration: f64,
    pub pitch: u8,
    pub velocity: u8,
    pub voice: Voice,
    pub kind: NoteKind,
}

/// What the melody generator drew for one note, before any truncation at
/// the bar line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoteDraw {
    pub kind: NoteKind,
    pub drawn: NoteValue,
    pub emitted: NoteValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generation {
    pub events: Vec<NoteEvent>,
    pub draws: Vec<NoteDraw>,
}

/// Generates `bars` bars of music for `affect`.
pub fn generate<R: Rng + ?Sized>(
    affect: Affect,
    bars: u32,
    rng: &mut R,
    config: &MusicConfig,
) -> Result<Vec<NoteEvent>, MusicError> {
    generate_traced(affect, bars, rng, config).map(|g| g.events)
}

/// Like [`generate`], also returning the per-note draws of the melody voice.
pub fn generate_traced<R: Rng + ?Sized>(
    affect: Affect,
    bars: u32,
    rng: &mut R,
    config: &MusicConfig,
) -> Result<Generation, MusicError> {
    if bars == 0 {
        return Err(MusicError::InvalidBarCount(bars));
    }
    let row = config.rows.get(&affect).ok_or(MusicError::MissingRow(affect))?;
    if row.progression.is_empty() {
        return Err(MusicError::DegenerateRow(affect, "chord"));
    }
    let kind_weights: Vec<f64> = NoteKind::ALL.iter().map(|&k| row.note_types.get(k)).collect();
    let value_weights: Vec<f64> = NoteValue::ALL.iter().map(|&v| row.durations.get(v)).collect();
    let leap_weights: Vec<f64> = row.intervals.iter().map(|i| i.weight).collect();
    let degenerate = |what| move |_| MusicError::DegenerateRow(affect, what);

    let [lo, hi] = row.melody_range;
    let mut events = Vec::new();
    let mut draws = Vec::new();
    let mut previous: Option<u8> = None;

    for bar in 0..bars {
        let chord = row.progression[bar as usize % row.progression.len()];
        let scale = row.scale.scale_for(&chord);
        let bar_start = f64::from(bar) * BEATS_PER_BAR;

        for pc in chord.pitch_classes() {
            let offset = (pc.value() + 12 - chord.root.value()) % 12;
            events.push(NoteEvent {
                onset: bar_start,
                duration: BEATS_PER_BAR,
                pitch: row.harmony_base + chord.root.value() + offset,
                velocity: row.velocities.harmony,
                voice: Voice::Harmony,
                kind: NoteKind::ChordNote,
            });
        }

        let scale_pitches = scale.pitches_in(lo, hi);
        let chord_pitches: Vec<u8> =
            (lo..=hi).filter(|&p| chord.contains(PitchClass::of_pitch(p))).collect();
        let prev = previous.unwrap_or_else(|| nearest(&scale_pitches, (lo + hi) / 2));

        let mut prev = prev;
        let mut filled = 0.0;
        while filled < BEATS_PER_BAR - 1e-9 {
            let drawn = NoteValue::ALL[roulette_select(&value_weights, rng).map_err(degenerate("duration"))?];
            let emitted = NoteValue::longest_within(BEATS_PER_BAR - filled);
            let emitted = if drawn.beats() <= emitted.beats() { drawn } else { emitted };
            let kind = NoteKind::ALL[roulette_select(&kind_weights, rng).map_err(degenerate("note type"))?];
            let step = row.intervals[roulette_select(&leap_weights, rng).map_err(degenerate("interval"))?].step;

            let anchor = index_of_nearest(&scale_pitches, prev) as i64;
            let len = scale_pitches.len() as i64;
            let mut idx = anchor + i64::from(step);
            if !(0..len).contains(&idx) {
                idx = anchor - i64::from(step);
            }
            let target = scale_pitches[idx.clamp(0, len - 1) as usize];

            let pitch = match kind {
                NoteKind::ScaleNote => target,
                NoteKind::ChordNote => nearest(&chord_pitches, target),
                NoteKind::Chromatism => {
                    let outside: Vec<u8> = [target - 1, target + 1]
                        .into_iter()
                        .filter(|&p| !scale.contains(PitchClass::of_pitch(p)))
                        .collect();
                    match outside.len() {
                        0 => target + 1,
                        1 => outside[0],
                        _ => outside[rng.random_range(0..2)],
                    }
                }
            };

            events.push(NoteEvent {
                onset: bar_start + filled,
                duration: emitted.beats(),
                pitch,
                velocity: row.velocities.melody,
                voice: Voice::Melody,
                kind,
            });
            draws.push(NoteDraw { kind, drawn, emitted });
            filled += emitted.beats();
            prev = pitch;
        }
        previous = Some(prev);
    }

    events.sort_by(|a, b| {
        a.onset
            .total_cmp(&b.onset)
            .then(b.voice.cmp(&a.voice))
            .then(a.pitch.cmp(&b.pitch))
    });
    Ok(Generation { events, draws })
}

fn index_of_nearest(sorted: &[u8], target: u8) -> usize {
    let mut best = 0;
    for (i, &p) in sorted.iter().enumerate() {
        if p.abs_diff(target) < sorted[best].abs_diff(target) {
            best = i;
        }
    }
    best
}

fn nearest(sorted: &[u8], target: u8) -> u8 {
    sorted[index_of_nearest(sorted, target)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::StyleConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config() -> MusicConfig {
        StyleConfig::shipped().music.clone()
    }

    fn degenerate(mut cfg: MusicConfig, nt: [f64; 3], d: [f64; 4]) -> MusicConfig {
        for row in cfg.rows.values_mut() {
            row.note_types = NoteTypeProbabilities { scale_note: nt[0], chord_note: nt[1], chromatism: nt[2] };
            row.durations = DurationProbabilities { whole: d[0], half: d[1], quarter: d[2], eighth: d[3] };
        }
        cfg
    }

    #[test]
    fn zero_bars_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            generate(Affect::Joy, 0, &mut rng, &config()),
            Err(MusicError::InvalidBarCount(0))
        );
    }

    #[test]
    fn single_whole_chord_note() {
        let cfg = degenerate(config(), [0.0, 1.0, 0.0], [1.0, 0.0, 0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let events = generate(Affect::Sadness, 1, &mut rng, &cfg).unwrap();
        let melody: Vec<_> = events.iter().filter(|e| e.voice == Voice::Melody).collect();
        assert_eq!(melody.len(), 1);
        assert_eq!(melody[0].duration, 4.0);
        let chord = cfg.rows[&Affect::Sadness].progression[0];
        assert!(chord.contains(PitchClass::of_pitch(melody[0].pitch)));
    }

    #[test]
    fn every_bar_sums_to_four_beats() {
        let cfg = config();
        for affect in Affect::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let events = generate(affect, 16, &mut rng, &cfg).unwrap();
            let mut per_bar = [0.0f64; 16];
            for e in events.iter().filter(|e| e.voice == Voice::Melody) {
                let bar = (e.onset / BEATS_PER_BAR).floor() as usize;
                assert!(e.onset + e.duration <= (bar as f64 + 1.0) * BEATS_PER_BAR + 1e-9);
                per_bar[bar] += e.duration;
            }
            assert!(per_bar.iter().all(|&b| b == 4.0), "{affect}: {per_bar:?}");
        }
    }

    #[test]
    fn chromatic_notes_neighbour_the_scale() {
        let cfg = degenerate(config(), [0.0, 0.0, 1.0], [0.0, 0.0, 0.5, 0.5]);
        for affect in Affect::ALL {
            let row = &cfg.rows[&affect];
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let events = generate(affect, 8, &mut rng, &cfg).unwrap();
            for e in events.iter().filter(|e| e.voice == Voice::Melody) {
                let bar = (e.onset / BEATS_PER_BAR) as usize;
                let chord = row.progression[bar % row.progression.len()];
                let scale = row.scale.scale_for(&chord);
                let pc = PitchClass::of_pitch(e.pitch);
                assert!(
                    scale.contains(pc.transpose(1)) || scale.contains(pc.transpose(-1)),
                    "{affect}: pitch {} is not next to the scale",
                    e.pitch
                );
            }
        }
    }

    #[test]
    fn harmony_plays_one_chord_per_bar() {
        let cfg = config();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let events = generate(Affect::Joy, 5, &mut rng, &cfg).unwrap();
        let row = &cfg.rows[&Affect::Joy];
        for bar in 0..5 {
            let chord = row.progression[bar % row.progression.len()];
            let tones: Vec<_> = events
                .iter()
                .filter(|e| e.voice == Voice::Harmony && e.onset == bar as f64 * 4.0)
                .collect();
            assert_eq!(tones.len(), chord.pitch_classes().len());
            assert!(tones.iter().all(|e| e.duration == 4.0 && chord.contains(PitchClass::of_pitch(e.pitch))));
        }
    }

    #[test]
    fn events_sorted_by_onset() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let events = generate(Affect::Fear, 6, &mut rng, &config()).unwrap();
        assert!(events.windows(2).all(|w| w[0].onset <= w[1].onset));
    }

    #[test]
    fn shipped_rows_are_valid() {
        assert!(config().problems().is_empty(), "{:?}", config().problems());
    }

    #[test]
    fn reports_bad_distribution() {
        let mut cfg = config();
        cfg.rows.get_mut(&Affect::Joy).unwrap().durations.whole += 0.5;
        let problems = cfg.problems();
        assert_eq!(problems.len(), 1);
        assert_eq!(problems[0].0, "music.rows.joy.durations");
    }
}
