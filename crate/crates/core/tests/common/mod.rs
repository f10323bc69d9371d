//! MIDI decoding shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use affiche::essys::{NoteEvent, Voice, TICKS_PER_QUARTER};
use midly::{MetaMessage, MidiMessage, Smf, Timing, TrackEventKind};

/// (voice, onset tick, duration ticks, pitch, velocity)
pub type Note = (Voice, u32, u32, u8, u8);

pub fn expected_notes(events: &[NoteEvent]) -> Vec<Note> {
    let q = f64::from(TICKS_PER_QUARTER);
    let mut v: Vec<Note> = events
        .iter()
        .map(|e| (e.voice, (e.onset * q).round() as u32, (e.duration * q).round() as u32, e.pitch, e.velocity))
        .collect();
    v.sort();
    v
}

pub struct Decoded {
    pub notes: Vec<Note>,
    pub tempo_micros: Option<u32>,
    pub programs: HashMap<u8, u8>,
}

pub fn decode(bytes: &[u8]) -> Decoded {
    let smf = Smf::parse(bytes).expect("valid SMF");
    assert_eq!(smf.header.timing, Timing::Metrical(TICKS_PER_QUARTER.into()));
    assert_eq!(smf.tracks.len(), 3);
    let mut notes = Vec::new();
    let mut tempo_micros = None;
    let mut programs = HashMap::new();
    for track in &smf.tracks {
        let mut now = 0u32;
        let mut open: HashMap<(u8, u8), Vec<(u32, u8)>> = HashMap::new();
        let mut ended = false;
        for ev in track {
            assert!(!ended, "events after end of track");
            now += u32::from(ev.delta);
            match ev.kind {
                TrackEventKind::Meta(MetaMessage::Tempo(t)) => tempo_micros = Some(u32::from(t)),
                TrackEventKind::Meta(MetaMessage::EndOfTrack) => ended = true,
                TrackEventKind::Midi { channel, message } => {
                    let ch = u8::from(channel);
                    match message {
                        MidiMessage::ProgramChange { program } => {
                            programs.insert(ch, u8::from(program));
                        }
                        MidiMessage::NoteOn { key, vel } if u8::from(vel) > 0 => {
                            open.entry((ch, u8::from(key))).or_default().push((now, u8::from(vel)));
                        }
                        MidiMessage::NoteOff { key, .. } | MidiMessage::NoteOn { key, .. } => {
                            let (on, vel) = open.get_mut(&(ch, u8::from(key))).and_then(|s| s.pop()).expect("off without on");
                            let voice = if ch == 0 { Voice::Melody } else { Voice::Harmony };
                            notes.push((voice, on, now - on, u8::from(key), vel));
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        assert!(ended, "track without end marker");
        assert!(open.values().all(Vec::is_empty), "dangling notes");
    }
    notes.sort();
    Decoded { notes, tempo_micros, programs }
}
