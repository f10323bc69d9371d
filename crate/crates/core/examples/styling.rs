//! Draws poster styles for a two-emotion profile and tallies the outcomes.

use std::collections::BTreeMap;

use affiche::config::StyleConfig;
use affiche::emotion::{Emotion, EmotionProfile, EmotionScores};
use affiche::styling::style_poster;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let config = StyleConfig::shipped();
    let scores = EmotionScores::zero().with(Emotion::Joy, 0.8).with(Emotion::Trust, 0.45);
    let profile = EmotionProfile::from_scores(scores, config.predominance_threshold);
    println!("predominant: {:?}", profile.predominant);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut backgrounds: BTreeMap<String, usize> = BTreeMap::new();
    let mut typefaces: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..1000 {
        let style = style_poster(&profile, &mut rng, config).expect("shipped config is complete");
        if i < 3 {
            println!("{}", serde_json::to_string(&style).unwrap());
        }
        *backgrounds.entry(style.background.style().name().into()).or_default() += 1;
        *typefaces.entry(style.typeface).or_default() += 1;
    }
    println!("backgrounds over 1000 draws: {backgrounds:?}");
    println!("typefaces over 1000 draws:   {typefaces:?}");
}
