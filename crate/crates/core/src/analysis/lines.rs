//! Stochastic division of sentences into typographic lines.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::LineDivision;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinePlan {
    pub lines: Vec<String>,
    pub word_counts: Vec<usize>,
}

impl LinePlan {
    pub fn from_lines(lines: Vec<String>) -> Self {
        let word_counts = lines.iter().map(|l| l.split_whitespace().count()).collect();
        Self { lines, word_counts }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Longest line in characters.
    pub fn max_line_chars(&self) -> usize {
        self.lines.iter().map(|l| l.chars().count()).max().unwrap_or(0)
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().map(|l| l.chars().count()).sum()
    }
}

/// Whether `word` is too short to end a line.
pub fn is_small_word(word: &str, max_chars: usize) -> bool {
    word.chars().filter(|c| c.is_alphanumeric()).count() <= max_chars
}

/// Can `words` be cut into chunks that each hold `min..=max` words?
fn partitionable(words: usize, min: usize, max: usize) -> bool {
    words >= min && words.div_ceil(max) <= words / min
}

/// Splits each over-long sentence into lines of `min_words..=max_words`
/// words, drawing uniformly among the admissible break points. A break
/// point is admissible when the line does not end in a small word and the
/// remaining words can still be divided within range, which also keeps the
/// last line from falling under `min_words`. When no break point
/// qualifies, the small-word rule is dropped first, then the upper bound.
pub fn divide_lines<R: Rng + ?Sized>(sentences: &[String], rng: &mut R, rules: &LineDivision) -> LinePlan {
    let mut lines = Vec::new();
    for sentence in sentences {
        let words: Vec<&str> = sentence.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        if words.len() <= rules.max_words {
            lines.push(words.join(" "));
            continue;
        }
        let mut pos = 0;
        while pos < words.len() {
            let remaining = words.len() - pos;
            if remaining <= rules.max_words {
                lines.push(words[pos..].join(" "));
                break;
            }
            let take = choose_break(&words[pos..], rng, rules);
            lines.push(words[pos..pos + take].join(" "));
            pos += take;
        }
    }
    LinePlan::from_lines(lines)
}

fn choose_break<R: Rng + ?Sized>(words: &[&str], rng: &mut R, rules: &LineDivision) -> usize {
    let (min, max) = (rules.min_words, rules.max_words);
    let n = words.len();
    let ends_small = |k: usize| is_small_word(words[k - 1], rules.small_word_max_chars);

    let in_range = (min..=max.min(n - 1)).filter(|&k| partitionable(n - k, min, max));
    let mut candidates: Vec<usize> = in_range.clone().filter(|&k| !ends_small(k)).collect();
    if candidates.is_empty() {
        candidates = in_range.collect();
    }
    if candidates.is_empty() {
        // over the upper bound: either keep everything or leave at least min
        candidates = (min..=n).filter(|&k| k == n || n - k >= min).collect();
        let tidy: Vec<usize> = candidates.iter().copied().filter(|&k| k == n || !ends_small(k)).collect();
        if !tidy.is_empty() {
            candidates = tidy;
        }
    }
    candidates[rng.random_range(0..candidates.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const RULES: LineDivision = LineDivision { min_words: 3, max_words: 7, small_word_max_chars: 2 };

    fn words(n: usize) -> String {
        (0..n).map(|i| format!("word{i}")).collect::<Vec<_>>().join(" ")
    }

    /// Checks the division constraints independently of how the lines were made.
    fn violations(sentence: &str, plan: &LinePlan, rules: &LineDivision) -> Vec<String> {
        let mut out = Vec::new();
        let flat: Vec<&str> = plan.lines.iter().flat_map(|l| l.split_whitespace()).collect();
        let src: Vec<&str> = sentence.split_whitespace().collect();
        if flat != src {
            out.push("word sequence changed".to_string());
        }
        for (i, line) in plan.lines.iter().enumerate() {
            let n = line.split_whitespace().count();
            if !(rules.min_words..=rules.max_words).contains(&n) {
                out.push(format!("line {i} has {n} words"));
            }
            let last = line.split_whitespace().last().unwrap();
            if i + 1 < plan.lines.len() && is_small_word(last, rules.small_word_max_chars) {
                out.push(format!("line {i} ends in `{last}`"));
            }
        }
        out
    }

    #[test]
    fn short_sentence_unchanged() {
        let s = vec!["one two three four".to_string()];
        let plan = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(0), &RULES);
        assert_eq!(plan.lines, s);
        assert_eq!(plan.word_counts, vec![4]);
    }

    #[test]
    fn long_sentence_stays_in_range() {
        let s = vec![words(30)];
        for seed in 0..200 {
            let plan = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(seed), &RULES);
            assert!(violations(&s[0], &plan, &RULES).is_empty(), "{plan:?}");
        }
    }

    #[test]
    fn no_break_after_small_word() {
        let s = vec!["we walked along the river for most of it".to_string()];
        for seed in 0..200 {
            let plan = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(seed), &RULES);
            for line in &plan.lines[..plan.lines.len() - 1] {
                assert!(!line.ends_with(" of"), "{plan:?}");
            }
            assert!(violations(&s[0], &plan, &RULES).is_empty(), "{plan:?}");
        }
    }

    #[test]
    fn small_word_rule_relaxes_when_forced() {
        let s = vec!["a b c d e f g h i j".to_string()];
        let plan = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(1), &RULES);
        assert_eq!(plan.lines.len(), 2);
        assert!(plan.word_counts.iter().all(|&n| (3..=7).contains(&n)));
    }

    #[test]
    fn upper_bound_relaxes_when_range_is_impossible() {
        let rules = LineDivision { min_words: 5, max_words: 7, small_word_max_chars: 2 };
        let s = vec![words(8)];
        let plan = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(0), &rules);
        assert_eq!(plan.lines, s);
    }

    #[test]
    fn seeded_division_is_reproducible() {
        let s = vec![words(40), words(12)];
        let a = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(9), &RULES);
        let b = divide_lines(&s, &mut ChaCha8Rng::seed_from_u64(9), &RULES);
        assert_eq!(a, b);
    }

    #[test]
    fn partition_feasibility() {
        assert!(partitionable(3, 3, 7));
        assert!(!partitionable(2, 3, 7));
        assert!(partitionable(8, 3, 7));
        assert!(!partitionable(8, 5, 7));
        assert!(partitionable(10, 5, 7));
    }
}
