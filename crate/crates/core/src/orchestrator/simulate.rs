//! Simulated installation run. The tick loop owns the selection state and
//! hands selected items to worker threads over a channel; finished posters
//! come back on a second channel.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Utc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pipeline::{derive_seed, run_pipeline, PipelineContext, PipelineError, PipelineOutput};
use super::{FeedStore, Selection, SelectionState, StoreError, DEFAULT_HALF_LIFE_SECS, DEFAULT_TICK_HZ};
use crate::analysis::Tweet;
use crate::emotion::Emotion;

/// File name of the index of items on display.
pub const CURRENT_INDEX: &str = "current.json";

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    pub ticks: u64,
    pub tick_hz: f64,
    pub seed: u64,
    pub half_life_secs: f64,
    /// Pipeline worker threads; 0 runs the selection loop alone.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub midi: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            ticks: 1000,
            tick_hz: DEFAULT_TICK_HZ,
            seed: 0,
            half_life_secs: DEFAULT_HALF_LIFE_SECS,
            workers: 2,
            out: None,
            midi: true,
        }
    }
}

/// One entry of `current.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentItem {
    pub id: String,
    pub text: String,
    pub predominant: Vec<Emotion>,
    pub poster: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audio: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum SimulationError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot write simulation output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Default)]
pub struct SimulationReport {
    pub selections: Vec<Selection>,
    /// Active count after each tick.
    pub active_counts: Vec<usize>,
    pub paused_ticks: u64,
    pub end_clock: Option<DateTime<Utc>>,
    pub completed: Vec<PipelineOutput>,
    pub failures: Vec<PipelineError>,
    /// Items on display at the end whose posters were ready.
    pub current: Vec<CurrentItem>,
}

impl SimulationReport {
    pub fn selection_counts(&self) -> HashMap<String, u32> {
        let mut counts = HashMap::new();
        for s in &self.selections {
            *counts.entry(s.id.clone()).or_insert(0) += 1;
        }
        counts
    }
}

struct Job {
    tweet: Tweet,
    seed: u64,
}

fn current_item(out: &PipelineOutput, tweet_text: &str, midi: bool) -> CurrentItem {
    CurrentItem {
        id: out.id.clone(),
        text: tweet_text.to_string(),
        predominant: out.predominant().to_vec(),
        poster: out.poster_file_name(),
        audio: midi.then(|| out.midi_file_name()),
    }
}

fn write_index(dir: &Path, items: &[CurrentItem]) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(items).expect("index serializes");
    let tmp = dir.join(format!("{CURRENT_INDEX}.tmp"));
    fs::write(&tmp, json)?;
    fs::rename(tmp, dir.join(CURRENT_INDEX))
}

pub fn read_index(dir: &Path) -> std::io::Result<Vec<CurrentItem>> {
    let text = fs::read_to_string(dir.join(CURRENT_INDEX))?;
    serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

/// Runs `options.ticks` ticks starting at `start`.
pub fn simulate(
    store: &dyn FeedStore,
    ctx: &PipelineContext,
    start: DateTime<Utc>,
    options: &SimulationOptions,
) -> Result<SimulationReport, SimulationError> {
    let mut state = SelectionState::new(start, options.tick_hz, ChaCha8Rng::seed_from_u64(options.seed))
        .with_half_life(options.half_life_secs);
    let mut report = SimulationReport::default();
    if let Some(dir) = &options.out {
        fs::create_dir_all(dir)?;
    }

    std::thread::scope(|scope| -> Result<(), SimulationError> {
        let (job_tx, job_rx) = mpsc::channel::<Job>();
        let (done_tx, done_rx) = mpsc::channel::<(String, Result<PipelineOutput, PipelineError>)>();
        let job_rx = Arc::new(Mutex::new(job_rx));
        for _ in 0..options.workers {
            let job_rx = Arc::clone(&job_rx);
            let done_tx = done_tx.clone();
            scope.spawn(move || loop {
                let job = job_rx.lock().expect("job queue lock").recv();
                let Ok(job) = job else { break };
                let result = run_pipeline(&job.tweet, ctx, job.seed);
                if done_tx.send((job.tweet.text.clone(), result)).is_err() {
                    break;
                }
            });
        }
        drop(done_tx);

        // id -> index entry, for items whose posters are ready
        let mut ready: BTreeMap<String, CurrentItem> = BTreeMap::new();
        let mut index_dirty = false;
        let collect = |result: (String, Result<PipelineOutput, PipelineError>),
                           report: &mut SimulationReport,
                           ready: &mut BTreeMap<String, CurrentItem>|
         -> Result<bool, SimulationError> {
            match result {
                (text, Ok(out)) => {
                    if let Some(dir) = &options.out {
                        out.write(dir, options.midi)?;
                    }
                    ready.insert(out.id.clone(), current_item(&out, &text, options.midi));
                    report.completed.push(out);
                    Ok(true)
                }
                (_, Err(e)) => {
                    report.failures.push(e);
                    Ok(false)
                }
            }
        };

        for _ in 0..options.ticks {
            let outcome = state.tick(store)?;
            report.paused_ticks += u64::from(outcome.paused);
            for id in &outcome.expired {
                index_dirty |= ready.remove(id).is_some();
            }
            if let Some(sel) = outcome.selected {
                if options.workers > 0 {
                    if let Some(tweet) = store.get(&sel.id)? {
                        let seed = derive_seed(options.seed, report.selections.len() as u64, 0);
                        let _ = job_tx.send(Job { tweet, seed });
                    }
                }
                report.selections.push(sel);
            }
            while let Ok(result) = done_rx.try_recv() {
                index_dirty |= collect(result, &mut report, &mut ready)?;
            }
            report.active_counts.push(state.active.len());
            if index_dirty {
                if let Some(dir) = &options.out {
                    write_index(dir, &ready.values().cloned().collect::<Vec<_>>())?;
                }
                index_dirty = false;
            }
        }
        drop(job_tx);
        for result in done_rx {
            collect(result, &mut report, &mut ready)?;
        }
        let active: Vec<&str> = state.active.iter().map(|s| s.id.as_str()).collect();
        ready.retain(|id, _| active.contains(&id.as_str()));
        report.current = ready.into_values().collect();
        if let Some(dir) = &options.out {
            write_index(dir, &report.current)?;
        }
        Ok(())
    })?;

    report.completed.sort_by(|a, b| a.id.cmp(&b.id));
    report.end_clock = Some(state.clock);
    Ok(report)
}
