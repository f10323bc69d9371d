//! Preprocessing a tweet: features, emotion scores, sentences and lines.
//!
//! cargo run --example classify -- "So happy today! #Coimbra https://t.co/x"

use affiche::analysis::{Analyzer, LexiconScorer};
use affiche::config::StyleConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        "Can't believe it, we finally won the cup! 🎉 Thank you @UC_Coimbra for the best night ever. #champions".into()
    });
    let scorer = LexiconScorer::bundled();
    let config = StyleConfig::shipped();
    let analysis = Analyzer::new(&scorer)
        .analyze(&text, None, &mut ChaCha8Rng::seed_from_u64(1), config)
        .expect("lexicon scoring cannot fail");

    println!("hashtags: {:?}", analysis.meta.hashtags);
    println!("mentions: {:?}", analysis.meta.mentions);
    println!("urls:     {:?}", analysis.meta.urls);
    println!("emojis:   {:?}", analysis.meta.emojis);
    println!("cleaned:  {}", analysis.cleaned);
    println!();
    for (emotion, score) in analysis.profile.scores.iter() {
        let mark = if analysis.profile.predominant.contains(&emotion) { "*" } else { " " };
        println!("{mark} {:<13}{score:.3}", emotion.name());
    }
    println!("affect: {}", analysis.profile.affect().name());
    println!();
    for line in &analysis.plan.lines {
        println!("| {line}");
    }
}
