use std::fs;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{Duration, Utc};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use affiche::analysis::{read_corpus, EmotionScorer, HttpScorer, LexiconScorer, Tweet};
use affiche::config::{load_config_dir, StyleConfig};
use affiche::orchestrator::bench::run_bench;
use affiche::orchestrator::corpus::{bundled_bench_texts, read_bench_texts, synthetic_corpus};
use affiche::orchestrator::pipeline::{run_pipeline, PipelineContext};
use affiche::orchestrator::simulate::{simulate, SimulationOptions};
use affiche::orchestrator::{serve, MemoryStore};
use affiche::typesetter::{FontMeasurer, SyntheticMeasurer, TextMeasurer};

type Error = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "affiche", version, about = "Emotion-driven typographic posters and ambient MIDI")]
struct Cli {
    /// Directory holding colours.json, typefaces.json and music.json.
    #[arg(long, global = true, env = "AFFICHE_CONFIG_DIR")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScoringArgs {
    /// Emotion lexicon (token, emotion, score) replacing the bundled one.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// HTTP emotion model taking {"text"} and returning scores.
    #[arg(long, conflicts_with = "lexicon")]
    scorer_url: Option<String>,
    /// Measure with the configured font files instead of synthetic metrics.
    #[arg(long)]
    font_metrics: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate posters (and optionally MIDI) for a text or a corpus.
    Generate {
        #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
        text: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        midi: bool,
        #[arg(long)]
        png: bool,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Run the selection loop over a corpus in simulated time.
    Simulate {
        /// JSONL corpus; a 500-item synthetic feed when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 6000)]
        ticks: u64,
        #[arg(long, default_value_t = 10.0)]
        tick_hz: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        half_life_min: f64,
        #[arg(long, default_value_t = 2)]
        workers: usize,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Repeated layout runs over a text set, written as CSV.
    Bench {
        /// `id<TAB>text` lines; the bundled set when absent.
        #[arg(long)]
        texts: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        runs: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "bench.csv")]
        report: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Serve a simulation output directory over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        #[arg(long, default_value = "out")]
        dir: PathBuf,
    },
}

fn load(config: Option<PathBuf>) -> Result<StyleConfig, Error> {
    Ok(match config {
        Some(dir) => load_config_dir(dir)?,
        None => StyleConfig::shipped().clone(),
    })
}

fn scorer(args: &ScoringArgs) -> Result<Box<dyn EmotionScorer>, Error> {
    Ok(match (&args.scorer_url, &args.lexicon) {
        (Some(url), _) => Box::new(HttpScorer::new(url)),
        (None, Some(path)) => Box::new(LexiconScorer::from_file(path)?),
        (None, None) => Box::new(LexiconScorer::bundled()),
    })
}

fn measurer(args: &ScoringArgs, config: &StyleConfig) -> Result<Box<dyn TextMeasurer>, Error> {
    Ok(if args.font_metrics {
        Box::new(FontMeasurer::from_typefaces(&config.typefaces)?)
    } else {
        Box::new(SyntheticMeasurer)
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    let config = load(cli.config)?;
    match cli.command {
        Command::Generate { text, corpus, seed, out, midi, png, scoring } => {
            if png && !cfg!(feature = "png") {
                return Err("PNG output needs the `png` feature".into());
            }
            let items = match (text, corpus) {
                (Some(text), _) => vec![Tweet { id: "text".into(), text, created_at: Utc::now(), lang: None, meta: Default::default() }],
                (None, Some(path)) => read_corpus(path)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let (scorer, measurer) = (scorer(&scoring)?, measurer(&scoring, &config)?);
            let mut ctx = PipelineContext::new(&config, scorer.as_ref(), measurer.as_ref());
            ctx.render.embed_font = scoring.font_metrics;
            for item in &items {
                let output = run_pipeline(item, &ctx, seed)?;
                for path in output.write(&out, midi)? {
                    println!("{}", path.display());
                }
                #[cfg(feature = "png")]
                if png {
                    let path = out.join(format!("{}_{}.png", output.id, output.seed));
                    fs::write(&path, output.poster.to_png()?)?;
                    println!("{}", path.display());
                }
            }
        }
        Command::Simulate { corpus, ticks, tick_hz, seed, out, half_life_min, workers, scoring } => {
            let items = match corpus {
                Some(path) => read_corpus(path)?,
                None => synthetic_corpus(500, Utc::now(), Duration::hours(12), &mut ChaCha8Rng::seed_from_u64(seed)),
            };
            let start = items.iter().map(|t| t.created_at).max().unwrap_or_else(Utc::now);
            let store = MemoryStore::new(items);
            let (scorer, measurer) = (scorer(&scoring)?, measurer(&scoring, &config)?);
            let ctx = PipelineContext::new(&config, scorer.as_ref(), measurer.as_ref());
            let options = SimulationOptions {
                ticks,
                tick_hz,
                seed,
                half_life_secs: half_life_min * 60.0,
                workers,
                out: Some(out.clone()),
                midi: true,
            };
            let report = simulate(&store, &ctx, start, &options)?;
            println!(
                "{} selections, {} posters, {} failures, {} paused ticks, {} on display",
                report.selections.len(),
                report.completed.len(),
                report.failures.len(),
                report.paused_ticks,
                report.current.len()
            );
            for e in &report.failures {
                eprintln!("{e}");
            }
            println!("{}", out.display());
        }
        Command::Bench { texts, runs, seed, report, scoring } => {
            if runs == 0 {
                return Err("--runs must be at least 1".into());
            }
            let texts = match texts {
                Some(path) => read_bench_texts(path)?,
                None => bundled_bench_texts(),
            };
            let (scorer, measurer) = (scorer(&scoring)?, measurer(&scoring, &config)?);
            let ctx = PipelineContext::new(&config, scorer.as_ref(), measurer.as_ref());
            let result = run_bench(&texts, runs, &ctx, seed);
            result.write_csv(fs::File::create(&report)?)?;
            if let Some(s) = result.summary() {
                println!(
                    "{} runs, {} failures: operations mean {:.2}, median {:.1}",
                    result.rows.len(),
                    result.failures.len(),
                    s.mean_operations,
                    s.median_operations
                );
            }
            println!("{}", report.display());
        }
        Command::Serve { addr, dir } => {
            let rt = tokio::runtime::Runtime::new()?;
            println!("serving {} on http://{addr}", dir.display());
            rt.block_on(serve::serve(addr, dir))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
