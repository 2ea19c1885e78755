use std::collections::HashMap;
use std::path::Path;

use crate::{Error, Result};

/// Profile length used by the shipped profiles.
pub const DEFAULT_PROFILE_LEN: usize = 400;
pub const MAX_NGRAM: usize = 5;

/// Character n-gram counts of `_`-padded words, `n = 1..=MAX_NGRAM`.
fn ngram_counts(text: &str) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    for word in text.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty()) {
        let padded: Vec<char> = std::iter::once('_')
            .chain(word.chars().flat_map(char::to_lowercase))
            .chain(std::iter::once('_'))
            .collect();
        for n in 1..=MAX_NGRAM {
            for w in padded.windows(n) {
                *counts.entry(w.iter().collect::<String>()).or_default() += 1;
            }
        }
    }
    counts
}

/// The `len` most frequent n-grams, ties broken lexicographically.
fn ranked(text: &str, len: usize) -> Vec<String> {
    let mut v: Vec<(String, u64)> = ngram_counts(text).into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(len);
    v.into_iter().map(|(g, _)| g).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    pub name: String,
    ngrams: Vec<String>,
    rank: HashMap<String, usize>,
}

impl LanguageProfile {
    pub fn from_ranked(name: impl Into<String>, ngrams: Vec<String>) -> Result<Self> {
        let name = name.into();
        let mut rank = HashMap::with_capacity(ngrams.len());
        for (i, g) in ngrams.iter().enumerate() {
            if g.is_empty() || rank.insert(g.clone(), i).is_some() {
                return Err(Error::Malformed {
                    what: "language profile",
                    location: format!("{name}:{}", i + 1),
                    reason: "empty or repeated n-gram".into(),
                });
            }
        }
        Ok(Self { name, ngrams, rank })
    }

    /// Builds a profile from sample text.
    pub fn train(name: impl Into<String>, text: &str, len: usize) -> Self {
        Self::from_ranked(name, ranked(text, len)).expect("ranked n-grams are unique")
    }

    /// Parses one n-gram per line in rank order.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        Self::from_ranked(name, text.lines().map(str::to_string).collect())
    }

    pub fn to_text(&self) -> String {
        self.ngrams.iter().map(|g| format!("{g}\n")).collect()
    }

    pub fn ngrams(&self) -> &[String] {
        &self.ngrams
    }

    /// Out-of-place distance from a document profile; n-grams missing from
    /// this profile cost `penalty`.
    pub fn distance(&self, doc: &[String], penalty: usize) -> usize {
        doc.iter()
            .enumerate()
            .map(|(i, g)| self.rank.get(g).map_or(penalty, |&r| r.abs_diff(i)))
            .sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfileSet {
    profiles: Vec<LanguageProfile>,
}

impl ProfileSet {
    pub fn new(profiles: Vec<LanguageProfile>) -> Self {
        Self { profiles }
    }

    /// Loads every `<language>.lm` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut profiles = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().is_some_and(|x| x == "lm") {
                let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                profiles.push(LanguageProfile::parse(name, &text)?);
            }
        }
        profiles.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(Self { profiles })
    }

    pub fn profiles(&self) -> &[LanguageProfile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    /// Languages ordered by ascending distance, then name.
    pub fn identify(&self, text: &str) -> Result<Vec<(String, usize)>> {
        if self.profiles.is_empty() {
            return Err(Error::NoProfiles);
        }
        let penalty = self.profiles.iter().map(|p| p.ngrams.len()).max().unwrap_or(0);
        let doc = ranked(text, penalty);
        if doc.is_empty() {
            return Err(Error::EmptyInput("no letters to identify a language from".into()));
        }
        let mut out: Vec<(String, usize)> = self
            .profiles
            .iter()
            .map(|p| (p.name.clone(), p.distance(&doc, penalty)))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    /// Whether `lang` is among the `top` closest languages.
    pub fn in_top(&self, text: &str, lang: &str, top: usize) -> Result<bool> {
        Ok(self.identify(text)?.iter().take(top).any(|(l, _)| l == lang))
    }
}
