//! Standard MIDI File (format 1) writer.

use super::{MusicRow, NoteEvent, Voice};

pub const TICKS_PER_QUARTER: u16 = 480;

const MELODY_CHANNEL: u8 = 0;
const HARMONY_CHANNEL: u8 = 1;

fn push_vlq(buf: &mut Vec<u8>, mut value: u32) {
    let mut stack = [0u8; 5];
    let mut n = 0;
    loop {
        stack[n] = (value & 0x7f) as u8;
        n += 1;
        value >>= 7;
        if value == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        buf.push(if i > 0 { stack[i] | 0x80 } else { stack[i] });
    }
}

fn push_chunk(out: &mut Vec<u8>, tag: &[u8; 4], body: &[u8]) {
    out.extend_from_slice(tag);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(body);
}

fn beats_to_ticks(beats: f64) -> u32 {
    (beats * f64::from(TICKS_PER_QUARTER)).round() as u32
}

fn conductor_track(tempo_bpm: f64) -> Vec<u8> {
    let micros = (60_000_000.0 / tempo_bpm).round().clamp(1.0, f64::from(0xff_ffff)) as u32;
    let mut t = Vec::new();
    push_vlq(&mut t, 0);
    t.extend_from_slice(&[0xff, 0x51, 0x03]);
    t.extend_from_slice(&micros.to_be_bytes()[1..]);
    push_vlq(&mut t, 0);
    // 4/4, 24 clocks per click, 8 32nds per quarter
    t.extend_from_slice(&[0xff, 0x58, 0x04, 0x04, 0x02, 0x18, 0x08]);
    push_vlq(&mut t, 0);
    t.extend_from_slice(&[0xff, 0x2f, 0x00]);
    t
}

fn voice_track(name: &str, channel: u8, program: u8, events: &[&NoteEvent]) -> Vec<u8> {
    // (tick, is_on, pitch, velocity); offs sort before ons at the same tick
    let mut messages: Vec<(u32, bool, u8, u8)> = Vec::with_capacity(events.len() * 2);
    for e in events {
        let on = beats_to_ticks(e.onset);
        let off = on + beats_to_ticks(e.duration);
        messages.push((on, true, e.pitch, e.velocity));
        messages.push((off, false, e.pitch, 0));
    }
    messages.sort_by_key(|&(tick, is_on, pitch, _)| (tick, is_on, pitch));

    let mut t = Vec::new();
    push_vlq(&mut t, 0);
    t.extend_from_slice(&[0xff, 0x03, name.len() as u8]);
    t.extend_from_slice(name.as_bytes());
    push_vlq(&mut t, 0);
    t.extend_from_slice(&[0xc0 | channel, program & 0x7f]);

    let mut now = 0;
    for (tick, is_on, pitch, velocity) in messages {
        push_vlq(&mut t, tick - now);
        now = tick;
        if is_on {
            t.extend_from_slice(&[0x90 | channel, pitch & 0x7f, velocity & 0x7f]);
        } else {
            t.extend_from_slice(&[0x80 | channel, pitch & 0x7f, 0]);
        }
    }
    push_vlq(&mut t, 0);
    t.extend_from_slice(&[0xff, 0x2f, 0x00]);
    t
}

/// Serializes events as an SMF format 1 file: a conductor track with tempo
/// and meter, then one track per voice with its program change.
pub fn emit_midi(events: &[NoteEvent], row: &MusicRow) -> Vec<u8> {
    let melody: Vec<&NoteEvent> = events.iter().filter(|e| e.voice == Voice::Melody).collect();
    let harmony: Vec<&NoteEvent> = events.iter().filter(|e| e.voice == Voice::Harmony).collect();

    let mut out = Vec::new();
    let mut header = Vec::with_capacity(6);
    header.extend_from_slice(&1u16.to_be_bytes());
    header.extend_from_slice(&3u16.to_be_bytes());
    header.extend_from_slice(&TICKS_PER_QUARTER.to_be_bytes());
    push_chunk(&mut out, b"MThd", &header);
    push_chunk(&mut out, b"MTrk", &conductor_track(row.tempo_bpm));
    push_chunk(
        &mut out,
        b"MTrk",
        &voice_track("melody", MELODY_CHANNEL, row.programs.melody, &melody),
    );
    push_chunk(
        &mut out,
        b"MTrk",
        &voice_track("harmony", HARMONY_CHANNEL, row.programs.harmony, &harmony),
    );
    out
}
