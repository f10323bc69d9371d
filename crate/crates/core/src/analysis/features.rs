//! Tweet feature extraction.
//!
//! Token grammar, applied to whitespace-separated tokens:
//!
//! * a token starting with `http://`, `https://` or `www.` is a URL; it is
//!   removed from the cleaned text (trailing `.,;:!?)]"'` stays attached to
//!   the previous word);
//! * `#` followed by word characters (`[\p{Alphabetic}\p{Nd}_]`) is a
//!   hashtag, `@` followed by word characters a mention; the sigil is
//!   stripped in the cleaned text;
//! * any character found in the bundled emoji table is an emoji.
//!
//! Line breaks survive cleaning so sentence splitting can use them.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const EMOJI_TABLE: &str = include_str!("../../data/emoji.tsv");
const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '"', '\''];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetMeta {
    pub hashtags: Vec<String>,
    pub mentions: Vec<String>,
    pub urls: Vec<String>,
    /// `(emoji, name)` in order of appearance.
    pub emojis: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Features {
    pub meta: TweetMeta,
    pub cleaned: String,
}

fn emoji_table() -> &'static HashMap<char, &'static str> {
    static TABLE: OnceLock<HashMap<char, &'static str>> = OnceLock::new();
    TABLE.get_or_init(|| {
        EMOJI_TABLE
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .filter_map(|l| {
                let (emoji, name) = l.split_once('\t')?;
                let mut chars = emoji.chars();
                let c = chars.next()?;
                chars.next().is_none().then_some((c, name.trim()))
            })
            .collect()
    })
}

/// Name of an emoji in the bundled table.
pub fn emoji_name(c: char) -> Option<&'static str> {
    emoji_table().get(&c).copied()
}

fn is_word_char(c: char) -> bool {
    c.is_alphabetic() || c.is_numeric() || c == '_'
}

fn is_url(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Word characters following a sigil, if any.
fn sigil_body(token: &str, sigil: char) -> Option<&str> {
    let rest = token.strip_prefix(sigil)?;
    let end = rest.char_indices().find(|&(_, c)| !is_word_char(c)).map_or(rest.len(), |(i, _)| i);
    (end > 0).then(|| &rest[..end])
}

pub fn extract_features(text: &str) -> Features {
    let mut meta = TweetMeta::default();
    let mut lines_out = Vec::new();

    for line in text.lines() {
        let mut words: Vec<String> = Vec::new();
        for token in line.split_whitespace() {
            if is_url(token) {
                let url = token.trim_end_matches(TRAILING_PUNCT);
                meta.urls.push(url.to_string());
                let tail = &token[url.len()..];
                if let (false, Some(last)) = (tail.is_empty(), words.last_mut()) {
                    last.push_str(tail);
                }
                continue;
            }
            for c in token.chars() {
                if let Some(name) = emoji_name(c) {
                    meta.emojis.push((c.to_string(), name.to_string()));
                }
            }
            if let Some(tag) = sigil_body(token, '#') {
                meta.hashtags.push(tag.to_string());
                words.push(token[1..].to_string());
            } else if let Some(user) = sigil_body(token, '@') {
                meta.mentions.push(user.to_string());
                words.push(token[1..].to_string());
            } else {
                words.push(token.to_string());
            }
        }
        if !words.is_empty() {
            lines_out.push(words.join(" "));
        }
    }

    Features { meta, cleaned: lines_out.join("\n") }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashtag_and_url() {
        let f = extract_features("go #Coimbra! https://t.co/x");
        assert_eq!(f.meta.hashtags, vec!["Coimbra"]);
        assert_eq!(f.meta.urls, vec!["https://t.co/x"]);
        assert_eq!(f.cleaned, "go Coimbra!");
    }

    #[test]
    fn empty_text() {
        assert_eq!(extract_features(""), Features::default());
    }

    #[test]
    fn emoji_lookup() {
        let f = extract_features("hello 😀");
        assert_eq!(f.meta.emojis, vec![("😀".to_string(), "grinning face".to_string())]);
        assert_eq!(f.cleaned, "hello 😀");
    }

    #[test]
    fn mentions_lose_sigil() {
        let f = extract_features("thanks @UC_Coimbra, see you");
        assert_eq!(f.meta.mentions, vec!["UC_Coimbra"]);
        assert_eq!(f.cleaned, "thanks UC_Coimbra, see you");
    }

    #[test]
    fn url_trailing_punctuation_moves_to_previous_word() {
        let f = extract_features("read this https://example.org/a. Then go");
        assert_eq!(f.meta.urls, vec!["https://example.org/a"]);
        assert_eq!(f.cleaned, "read this. Then go");
    }

    #[test]
    fn bare_sigils_are_words() {
        let f = extract_features("# @ #! we're #1");
        assert!(f.meta.mentions.is_empty());
        assert_eq!(f.meta.hashtags, vec!["1"]);
        assert_eq!(f.cleaned, "# @ #! we're 1");
    }

    #[test]
    fn keeps_line_breaks() {
        let f = extract_features("first line\n\nsecond  line https://a.b");
        assert_eq!(f.cleaned, "first line\nsecond line");
    }
}
