//! Eight bars for each affect, written as Standard MIDI Files.

use affiche::config::StyleConfig;
use affiche::emotion::Affect;
use affiche::essys::{emit_midi, generate, Voice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "music".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let music = &StyleConfig::shipped().music;
    for affect in Affect::ALL {
        let events = generate(affect, music.bars, &mut ChaCha8Rng::seed_from_u64(5), music).expect("row configured");
        let row = &music.rows[&affect];
        let melody: Vec<u8> = events.iter().filter(|e| e.voice == Voice::Melody).map(|e| e.pitch).collect();
        let path = dir.join(format!("{}.mid", affect.name()));
        std::fs::write(&path, emit_midi(&events, row)).unwrap();
        println!("{:<13}{:>4} bpm {:>3} melody notes, first {:?} -> {}", affect.name(), row.tempo_bpm, melody.len(), &melody[..6.min(melody.len())], path.display());
    }
}
