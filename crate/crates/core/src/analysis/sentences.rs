//! Rule-based sentence boundary detection.
//!
//! A token ending in `.`, `!`, `?` or `…` (optionally followed by closing
//! quotes or brackets) ends a sentence, unless the token is a known
//! abbreviation or a single-letter initial. A line break always ends a
//! sentence.

use std::collections::HashSet;
use std::sync::OnceLock;

const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '”', '’', '»'];
const TERMINATORS: &[char] = &['.', '!', '?', '…'];

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

fn ends_sentence(token: &str) -> bool {
    let core = token.trim_end_matches(CLOSERS);
    let Some(last) = core.chars().last() else {
        return false;
    };
    if !TERMINATORS.contains(&last) {
        return false;
    }
    if last == '.' && !core.ends_with("..") {
        let stem = core.trim_end_matches('.').trim_start_matches(['(', '"', '\'', '“', '‘']);
        let lower = stem.to_lowercase();
        if abbreviations().contains(lower.as_str()) {
            return false;
        }
        let mut chars = stem.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if c.is_uppercase() {
                return false;
            }
        }
    }
    true
}

/// Splits text into sentences. Words inside each sentence are joined by
/// single spaces; the concatenated word sequence equals the input's.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let mut current: Vec<&str> = Vec::new();
        for token in line.split_whitespace() {
            current.push(token);
            if ends_sentence(token) {
                out.push(current.join(" "));
                current.clear();
            }
        }
        if !current.is_empty() {
            out.push(current.join(" "));
        }
    }
    out
}
