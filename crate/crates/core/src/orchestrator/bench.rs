//! Repeated layout runs over a text set, reported as CSV.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::corpus::BenchText;
use super::pipeline::{derive_seed, layout_item, PipelineContext, PipelineError, RunStats};
use crate::stats::{mean, median};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub count: usize,
    pub mean_operations: f64,
    pub median_operations: f64,
    pub min_operations: u32,
    pub max_operations: u32,
    pub mean_elapsed_s: f64,
    pub median_elapsed_s: f64,
}

impl GroupSummary {
    pub fn of(rows: &[&RunStats]) -> Option<Self> {
        let ops: Vec<f64> = rows.iter().map(|r| f64::from(r.operations)).collect();
        let secs: Vec<f64> = rows.iter().map(|r| r.elapsed_s).collect();
        Some(Self {
            count: rows.len(),
            mean_operations: mean(&ops)?,
            median_operations: median(&ops)?,
            min_operations: rows.iter().map(|r| r.operations).min()?,
            max_operations: rows.iter().map(|r| r.operations).max()?,
            mean_elapsed_s: mean(&secs)?,
            median_elapsed_s: median(&secs)?,
        })
    }

    pub fn range(&self) -> u32 {
        self.max_operations - self.min_operations
    }
}

#[derive(Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<RunStats>,
    pub failures: Vec<PipelineError>,
}

impl BenchReport {
    pub fn summary(&self) -> Option<GroupSummary> {
        GroupSummary::of(&self.rows.iter().collect::<Vec<_>>())
    }

    /// Rows grouped by the number of lines the text was divided into.
    pub fn by_line_count(&self) -> BTreeMap<usize, GroupSummary> {
        let mut groups: BTreeMap<usize, Vec<&RunStats>> = BTreeMap::new();
        for r in &self.rows {
            groups.entry(r.lines).or_default().push(r);
        }
        groups.into_iter().filter_map(|(k, v)| Some((k, GroupSummary::of(&v)?))).collect()
    }

    /// Writes run rows, then one `summary` row and one `lines` row per
    /// line count.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "kind", "key", "id", "seed", "chars", "lines", "max_line_chars", "operations", "elapsed_s", "affect",
            "format", "background", "typeface", "final_size", "final_weight", "final_stretch", "contained",
            "legible", "count", "mean_operations", "median_operations", "min_operations", "max_operations",
            "mean_elapsed_s", "median_elapsed_s",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                "run".into(),
                String::new(),
                r.id.clone(),
                r.seed.to_string(),
                r.chars.to_string(),
                r.lines.to_string(),
                r.max_line_chars.to_string(),
                r.operations.to_string(),
                r.elapsed_s.to_string(),
                r.affect.name().into(),
                r.format.clone(),
                r.background.clone(),
                r.typeface.clone(),
                r.final_size.to_string(),
                opt(r.final_weight),
                opt(r.final_stretch),
                r.contained.to_string(),
                r.legible.to_string(),
            ].into_iter().chain(std::iter::repeat_n(String::new(), 7)))?;
        }
        let group_row = |kind: &str, key: String, g: &GroupSummary| {
            std::iter::once(kind.to_string())
                .chain(std::iter::once(key))
                .chain(std::iter::repeat_n(String::new(), 16))
                .chain([
                    g.count.to_string(),
                    g.mean_operations.to_string(),
                    g.median_operations.to_string(),
                    g.min_operations.to_string(),
                    g.max_operations.to_string(),
                    g.mean_elapsed_s.to_string(),
                    g.median_elapsed_s.to_string(),
                ])
                .collect::<Vec<_>>()
        };
        if let Some(s) = self.summary() {
            w.write_record(group_row("summary", "all".into(), &s))?;
        }
        for (lines, g) in self.by_line_count() {
            w.write_record(group_row("lines", lines.to_string(), &g))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Lays out every text `runs` times. Run `r` of text `i` uses the seed
/// `derive_seed(seed, i, r)`. Failed runs are collected, not fatal.
pub fn run_bench(texts: &[BenchText], runs: u32, ctx: &PipelineContext, seed: u64) -> BenchReport {
    let mut report = BenchReport::default();
    for (i, t) in texts.iter().enumerate() {
        for r in 0..runs {
            let run_seed = derive_seed(seed, i as u64, u64::from(r));
            match layout_item(&t.text, None, &t.id, ctx, run_seed) {
                Ok(layout) => report.rows.push(layout.stats),
                Err(source) => report.failures.push(PipelineError { id: t.id.clone(), source }),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::LexiconScorer;
    use crate::config::StyleConfig;
    use crate::typesetter::SyntheticMeasurer;

    fn text(id: &str, s: &str) -> BenchText {
        BenchText { id: id.into(), text: s.into() }
    }

    #[test]
    fn one_run_gives_one_row_and_summaries() {
        let scorer = LexiconScorer::bundled();
        let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
        let report = run_bench(&[text("a", "Sun is out. We run. Joy!")], 1, &ctx, 0);
        assert_eq!(report.rows.len(), 1);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        let kinds: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(kinds, vec!["run", "summary", "lines"]);
    }

    #[test]
    fn failures_are_collected() {
        let scorer = LexiconScorer::bundled();
        let ctx = PipelineContext::new(StyleConfig::shipped(), &scorer, &SyntheticMeasurer);
        let report = run_bench(&[text("blank", " "), text("ok", "fine words here")], 2, &ctx, 0);
        assert_eq!(report.failures.len(), 2);
        assert_eq!(report.rows.len(), 2);
    }
}
