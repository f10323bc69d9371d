//! Pitch classes, chords and scales.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A pitch class, 0 = C .. 11 = B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PitchClass(u8);

const SHARP_NAMES: [&str; 12] = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"];

impl PitchClass {
    pub fn new(pc: u8) -> Self {
        Self(pc % 12)
    }

    pub fn of_pitch(pitch: u8) -> Self {
        Self(pitch % 12)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn transpose(self, semitones: i32) -> Self {
        Self((i32::from(self.0) + semitones).rem_euclid(12) as u8)
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(SHARP_NAMES[self.0 as usize])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid pitch class `{0}`")]
pub struct InvalidPitchClass(pub String);

impl FromStr for PitchClass {
    type Err = InvalidPitchClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let base = match chars.next() {
            Some('C') => 0,
            Some('D') => 2,
            Some('E') => 4,
            Some('F') => 5,
            Some('G') => 7,
            Some('A') => 9,
            Some('B') => 11,
            _ => return Err(InvalidPitchClass(s.to_string())),
        };
        let mut offset = 0i32;
        for c in chars {
            offset += match c {
                '#' => 1,
                'b' => -1,
                _ => return Err(InvalidPitchClass(s.to_string())),
            };
        }
        Ok(PitchClass::new(0).transpose(base + offset))
    }
}

impl Serialize for PitchClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PitchClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordQuality {
    Major,
    Minor,
    Diminished,
    Augmented,
    Sus2,
    Sus4,
    Major7,
    Minor7,
    Dominant7,
}

impl ChordQuality {
    pub fn intervals(self) -> &'static [i32] {
        match self {
            ChordQuality::Major => &[0, 4, 7],
            ChordQuality::Minor => &[0, 3, 7],
            ChordQuality::Diminished => &[0, 3, 6],
            ChordQuality::Augmented => &[0, 4, 8],
            ChordQuality::Sus2 => &[0, 2, 7],
            ChordQuality::Sus4 => &[0, 5, 7],
            ChordQuality::Major7 => &[0, 4, 7, 11],
            ChordQuality::Minor7 => &[0, 3, 7, 10],
            ChordQuality::Dominant7 => &[0, 4, 7, 10],
        }
    }

    /// Mode used when a scale is derived from a chord built on this quality.
    fn implied_mode(self) -> Mode {
        match self {
            ChordQuality::Major | ChordQuality::Major7 | ChordQuality::Sus2 | ChordQuality::Sus4 => {
                Mode::Major
            }
            ChordQuality::Dominant7 => Mode::Mixolydian,
            ChordQuality::Minor | ChordQuality::Minor7 => Mode::Minor,
            ChordQuality::Diminished => Mode::Locrian,
            ChordQuality::Augmented => Mode::Lydian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub root: PitchClass,
    pub quality: ChordQuality,
}

impl Chord {
    pub fn pitch_classes(&self) -> Vec<PitchClass> {
        self.quality.intervals().iter().map(|&i| self.root.transpose(i)).collect()
    }

    pub fn contains(&self, pc: PitchClass) -> bool {
        self.pitch_classes().contains(&pc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Major,
    Minor,
    Dorian,
    Phrygian,
    Lydian,
    Mixolydian,
    Locrian,
    HarmonicMinor,
}

impl Mode {
    pub fn steps(self) -> [i32; 7] {
        match self {
            Mode::Major => [0, 2, 4, 5, 7, 9, 11],
            Mode::Minor => [0, 2, 3, 5, 7, 8, 10],
            Mode::Dorian => [0, 2, 3, 5, 7, 9, 10],
            Mode::Phrygian => [0, 1, 3, 5, 7, 8, 10],
            Mode::Lydian => [0, 2, 4, 6, 7, 9, 11],
            Mode::Mixolydian => [0, 2, 4, 5, 7, 9, 10],
            Mode::Locrian => [0, 1, 3, 5, 6, 8, 10],
            Mode::HarmonicMinor => [0, 2, 3, 5, 7, 8, 11],
        }
    }
}

/// A seven-note scale anchored at a tonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub tonic: PitchClass,
    pub mode: Mode,
}

impl Scale {
    pub fn pitch_classes(&self) -> [PitchClass; 7] {
        self.mode.steps().map(|s| self.tonic.transpose(s))
    }

    pub fn contains(&self, pc: PitchClass) -> bool {
        self.pitch_classes().contains(&pc)
    }

    /// All MIDI pitches of this scale in `lo..=hi`, ascending.
    pub fn pitches_in(&self, lo: u8, hi: u8) -> Vec<u8> {
        (lo..=hi).filter(|&p| self.contains(PitchClass::of_pitch(p))).collect()
    }
}

/// How the melodic scale is obtained from the harmony.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleRule {
    /// One scale for the whole progression.
    Key { tonic: PitchClass, mode: Mode },
    /// A scale rebuilt on the root of each active chord.
    ChordRoot,
}

impl ScaleRule {
    pub fn scale_for(&self, chord: &Chord) -> Scale {
        match *self {
            ScaleRule::Key { tonic, mode } => Scale { tonic, mode },
            ScaleRule::ChordRoot => Scale { tonic: chord.root, mode: chord.quality.implied_mode() },
        }
    }
}
