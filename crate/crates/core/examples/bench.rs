//! Runs the bundled bench texts and prints operation counts by line count
//! and the mean final stretch for short-line and long-line runs.
//!
//! cargo run --release --example bench -- [runs] [seed]

use affiche::analysis::LexiconScorer;
use affiche::config::StyleConfig;
use affiche::orchestrator::bench::run_bench;
use affiche::orchestrator::corpus::bundled_bench_texts;
use affiche::orchestrator::pipeline::PipelineContext;
use affiche::stats::{mann_whitney, mean, median};
use affiche::typesetter::SyntheticMeasurer;

fn main() {
    let mut args = std::env::args().skip(1);
    let runs: u32 = args.next().map_or(300, |a| a.parse().expect("runs"));
    let seed: u64 = args.next().map_or(2021, |a| a.parse().expect("seed"));

    let scorer = LexiconScorer::bundled();
    let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
    let texts = bundled_bench_texts();
    let started = std::time::Instant::now();
    let report = run_bench(&texts, runs, &ctx, seed);
    println!("{} runs, {} failures, {:.1}s", report.rows.len(), report.failures.len(), started.elapsed().as_secs_f64());

    if let Some(s) = report.summary() {
        println!("operations: mean {:.2}, median {:.1}, range {}..{}", s.mean_operations, s.median_operations, s.min_operations, s.max_operations);
    }
    println!("lines  runs  median  mean    min  max");
    for (lines, g) in report.by_line_count() {
        println!("{lines:>5} {:>5} {:>7.1} {:>6.1} {:>5} {:>4}", g.count, g.median_operations, g.mean_operations, g.min_operations, g.max_operations);
    }

    println!("text  chars  lines  max_line  median_ops");
    for t in &texts {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.id == t.id).collect();
        let ops: Vec<f64> = rows.iter().map(|r| f64::from(r.operations)).collect();
        let lines: Vec<f64> = rows.iter().map(|r| r.lines as f64).collect();
        let max_line: Vec<f64> = rows.iter().map(|r| r.max_line_chars as f64).collect();
        println!(
            "{:>4} {:>6} {:>6.2} {:>9.1} {:>11.1}",
            t.id,
            t.text.chars().count(),
            mean(&lines).unwrap_or(0.0),
            mean(&max_line).unwrap_or(0.0),
            median(&ops).unwrap_or(0.0)
        );
    }

    let stretch = |keep: fn(usize) -> bool| -> Vec<f64> {
        report.rows.iter().filter(|r| keep(r.max_line_chars)).filter_map(|r| r.final_stretch).collect()
    };
    let long = stretch(|c| c >= 40);
    let short = stretch(|c| c <= 15);
    if let (Some(l), Some(s), Some(t)) = (mean(&long), mean(&short), mann_whitney(&long, &short)) {
        println!("final stretch: long lines {l:.2} (n={}), short lines {s:.2} (n={}), p={:.2e}", long.len(), short.len(), t.p_value);
    }
}
