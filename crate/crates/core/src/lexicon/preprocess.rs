use std::collections::HashSet;
use std::path::Path;

use crate::{Error, Result};

/// A set of lowercase stop words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    /// Parses one word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)
            .map(|t| Self::parse(&t))
            .map_err(|e| Error::io(path, e))
    }

    pub fn contains(&self, w: &str) -> bool {
        self.0.contains(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopWords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

fn is_url(token: &str) -> bool {
    let t = token.to_lowercase();
    t.contains("://") || t.starts_with("www.")
}

/// Whitespace tokens with mentions, hashtags and URLs removed. Leading
/// punctuation is ignored when testing for `@`, `#` and URL prefixes.
fn content_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace().filter(|raw| {
        let t = raw.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '@' && c != '#');
        !(t.starts_with('@') || t.starts_with('#') || is_url(t))
    })
}

fn words(token: &str) -> impl Iterator<Item = String> + '_ {
    let cleaned: String = token
        .chars()
        .filter(|&c| c != '\'' && c != '\u{2019}')
        .flat_map(char::to_lowercase)
        .collect();
    cleaned
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect::<Vec<_>>()
        .into_iter()
}

/// Lowercase word tokens of a tweet without mentions, hashtags, URLs,
/// punctuation and stop words.
pub fn preprocess(text: &str, stop: &StopWords) -> Vec<String> {
    content_tokens(text)
        .flat_map(words)
        .filter(|w| !stop.contains(w))
        .collect()
}

/// The text used for language identification: mentions, hashtags and URLs
/// removed, stop words kept.
pub fn language_text(text: &str) -> String {
    content_tokens(text).flat_map(words).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stop() -> StopWords {
        ["rt", "the", "a", "is"].into_iter().collect()
    }

    #[test]
    fn examples() {
        assert_eq!(preprocess("RT @bob check http://x.io #oscars tonight", &stop()), ["check", "tonight"]);
        assert!(preprocess("@a @b #c", &stop()).is_empty());
        assert!(preprocess("The the THE", &stop()).is_empty());
        assert_eq!(preprocess("\"@bob: www.x.com Don't stop, (ok)!", &stop()), ["dont", "stop", "ok"]);
        assert_eq!(preprocess("state-of-the-art", &stop()), ["state", "of", "art"]);
    }

    #[test]
    fn language_text_keeps_stop_words() {
        assert_eq!(language_text("RT @bob the cat #x http://y"), "rt the cat");
    }

    #[test]
    fn stop_word_file_format() {
        let s = StopWords::parse("# comment\nA\n\n  b \n");
        assert!(s.contains("a") && s.contains("b"));
        assert_eq!(s.len(), 2);
    }

    proptest! {
        #[test]
        fn idempotent(text in "[ -~’é]{0,80}") {
            let once = preprocess(&text, &stop());
            let twice = preprocess(&once.join(" "), &stop());
            prop_assert_eq!(once, twice);
        }
    }
}
