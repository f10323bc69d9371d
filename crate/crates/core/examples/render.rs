//! Full poster for one text, written as SVG (and PNG with `--features png`).
//!
//! cargo run --example render -- "text" out_dir seed

use std::path::PathBuf;

use affiche::analysis::{LexiconScorer, Tweet};
use affiche::config::StyleConfig;
use affiche::orchestrator::pipeline::{run_pipeline, PipelineContext};
use affiche::typesetter::SyntheticMeasurer;
use chrono::Utc;

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "Nobody expected the ending. Everyone stood, applauding, crying, laughing.".into());
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "posters".into()));
    let seed: u64 = args.next().map_or(11, |s| s.parse().expect("seed"));

    let scorer = LexiconScorer::bundled();
    let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
    let tweet = Tweet { id: "example".into(), text, created_at: Utc::now(), lang: None, meta: Default::default() };
    let out = run_pipeline(&tweet, &ctx, seed).expect("pipeline");

    let style = &out.layout.style;
    println!("{} {} background, text {}, typeface {}", style.format.name, style.background.style(), style.background.fg().to_hex(), style.typeface);
    for path in out.write(&dir, true).expect("write") {
        println!("wrote {}", path.display());
    }
    #[cfg(feature = "png")]
    {
        let png = dir.join(format!("example_{seed}.png"));
        std::fs::write(&png, out.poster.to_png().expect("raster")).unwrap();
        println!("wrote {}", png.display());
    }
}
