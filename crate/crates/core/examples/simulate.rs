//! Ten simulated minutes of the installation over a synthetic feed.

use affiche::analysis::LexiconScorer;
use affiche::config::StyleConfig;
use affiche::orchestrator::corpus::synthetic_corpus;
use affiche::orchestrator::pipeline::PipelineContext;
use affiche::orchestrator::simulate::{simulate, SimulationOptions};
use affiche::orchestrator::MemoryStore;
use affiche::typesetter::SyntheticMeasurer;
use chrono::{Duration, TimeZone, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let now = Utc.with_ymd_and_hms(2021, 5, 1, 21, 0, 0).unwrap();
    let feed = synthetic_corpus(200, now, Duration::hours(3), &mut ChaCha8Rng::seed_from_u64(0));
    let store = MemoryStore::new(feed);
    let scorer = LexiconScorer::bundled();
    let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
    let out = std::env::args().nth(1).map(Into::into);
    let options = SimulationOptions { ticks: 6000, seed: 4, workers: 3, out, ..Default::default() };

    let report = simulate(&store, &ctx, now, &options).expect("simulation");
    for s in &report.selections {
        println!("{}  {:<6} for {:>5.1}s", s.selected_at.format("%H:%M:%S%.3f"), s.id, s.lifespan_secs);
    }
    println!(
        "{} selections, max {} on display, {} paused ticks",
        report.selections.len(),
        report.active_counts.iter().max().unwrap_or(&0),
        report.paused_ticks
    );
    for item in &report.current {
        println!("showing {} {:?}: {}", item.id, item.predominant, item.text);
    }
}
