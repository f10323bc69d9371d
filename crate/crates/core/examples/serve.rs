//! Simulates a short run into a temporary directory and serves it.
//!
//! cargo run --example serve -- 127.0.0.1:8080

use affiche::analysis::LexiconScorer;
use affiche::config::StyleConfig;
use affiche::orchestrator::corpus::synthetic_corpus;
use affiche::orchestrator::pipeline::PipelineContext;
use affiche::orchestrator::simulate::{simulate, SimulationOptions};
use affiche::orchestrator::{serve, MemoryStore};
use affiche::typesetter::SyntheticMeasurer;
use chrono::{Duration, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into()).parse().expect("address");
    let dir = std::env::temp_dir().join("affiche-serve-example");
    let now = Utc::now();
    let store = MemoryStore::new(synthetic_corpus(50, now, Duration::hours(1), &mut ChaCha8Rng::seed_from_u64(0)));
    let scorer = LexiconScorer::bundled();
    let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
    let options = SimulationOptions { ticks: 100, out: Some(dir.clone()), ..Default::default() };
    simulate(&store, &ctx, now, &options).expect("simulation");

    println!("GET http://{addr}/current");
    serve::serve(addr, dir).await
}
