use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::langid::ProfileSet;
use super::lemmatize::lemmatize;
use super::porter::porter_stem;
use super::preprocess::{language_text, preprocess, StopWords};
use super::wordnet::{NodeIdx, Pos, Taxonomy};
use crate::mixture::ClassLabel;
use crate::{Error, Result};

/// What to do with a token whose first sense is not a noun.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonNounPolicy {
    /// Contribute nothing to the concept counts.
    #[default]
    Ignore,
    /// Use the first noun reached by a derivational, attribute or pertainym
    /// link.
    DerivedNoun,
}

impl FromStr for NonNounPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ignore" => Ok(Self::Ignore),
            "derived-noun" => Ok(Self::DerivedNoun),
            _ => Err(Error::param("non_noun", format!("unknown policy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundingParams {
    /// Resolved share of tokens below which the language gate applies.
    pub min_resolved: f64,
    pub language: String,
    /// The gate keeps a tweet when `language` ranks within this many.
    pub top_languages: usize,
    /// Retry unresolved tokens with their Porter stem.
    pub stem_fallback: bool,
    pub depth: u32,
    pub non_noun: NonNounPolicy,
}

impl Default for GroundingParams {
    fn default() -> Self {
        Self {
            min_resolved: 0.5,
            language: "english".into(),
            top_languages: 10,
            stem_fallback: true,
            depth: 4,
            non_noun: NonNounPolicy::Ignore,
        }
    }
}

impl GroundingParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.min_resolved) {
            return Err(Error::param("min_resolved", "must lie in [0, 1]"));
        }
        if self.top_languages == 0 {
            return Err(Error::param("top_languages", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetGrounding {
    pub tokens: Vec<String>,
    /// First sense of every resolved token, in token order.
    pub synsets: Vec<NodeIdx>,
    /// Dropped by the language gate.
    pub discarded: bool,
}

/// Resolves tweet text to lexicon senses and concepts.
pub struct Grounder<'a> {
    pub taxonomy: &'a Taxonomy,
    pub stop_words: &'a StopWords,
    pub profiles: &'a ProfileSet,
    pub params: GroundingParams,
}

impl<'a> Grounder<'a> {
    pub fn new(
        taxonomy: &'a Taxonomy,
        stop_words: &'a StopWords,
        profiles: &'a ProfileSet,
        params: GroundingParams,
    ) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            taxonomy,
            stop_words,
            profiles,
            params,
        })
    }

    fn first_sense(&self, word: &str) -> Option<NodeIdx> {
        Pos::ALL.into_iter().find_map(|pos| {
            lemmatize(word, pos, self.taxonomy)
                .iter()
                .find_map(|l| self.taxonomy.senses(l, pos).first().copied())
        })
    }

    /// Most frequent sense of a token, looked up by its raw form first and
    /// by its Porter stem second.
    pub fn resolve(&self, token: &str) -> Option<NodeIdx> {
        self.first_sense(token).or_else(|| {
            if !self.params.stem_fallback {
                return None;
            }
            let s = porter_stem(token);
            (s != token).then(|| self.first_sense(&s)).flatten()
        })
    }

    pub fn ground_tweet(&self, text: &str) -> TweetGrounding {
        let tokens = preprocess(text, self.stop_words);
        let synsets: Vec<NodeIdx> = tokens.iter().filter_map(|t| self.resolve(t)).collect();
        let mut discarded = false;
        if !tokens.is_empty() && (synsets.len() as f64) < self.params.min_resolved * tokens.len() as f64 {
            let keep = self
                .profiles
                .in_top(&language_text(text), &self.params.language, self.params.top_languages)
                .unwrap_or(false);
            discarded = !keep;
        }
        TweetGrounding {
            synsets: if discarded { Vec::new() } else { synsets },
            tokens,
            discarded,
        }
    }

    /// The noun a resolved sense counts as, if any.
    pub fn noun_for(&self, n: NodeIdx) -> Option<NodeIdx> {
        if self.taxonomy.id(n).pos == Pos::Noun {
            return Some(n);
        }
        match self.params.non_noun {
            NonNounPolicy::Ignore => None,
            NonNounPolicy::DerivedNoun => self.taxonomy.linked_nouns(n).first().copied(),
        }
    }

    /// Concept counts of one hashtag's tweets.
    pub fn concept_vector<'t>(&self, hashtag: &str, texts: impl IntoIterator<Item = &'t str>) -> ConceptVector {
        let mut v = ConceptVector {
            hashtag: hashtag.to_string(),
            ..ConceptVector::default()
        };
        for text in texts {
            let g = self.ground_tweet(text);
            self.accumulate(&mut v, &g);
        }
        v
    }

    /// Adds one grounded tweet to `v`.
    pub fn accumulate(&self, v: &mut ConceptVector, g: &TweetGrounding) {
        v.tweets += 1;
        if g.discarded {
            v.discarded += 1;
            return;
        }
        v.tokens += g.tokens.len() as u64;
        v.resolved += g.synsets.len() as u64;
        for &s in &g.synsets {
            let Some(noun) = self.noun_for(s) else {
                v.non_noun += 1;
                continue;
            };
            for c in self.taxonomy.rollup(noun, self.params.depth) {
                *v.counts.entry(self.taxonomy.key(c)).or_default() += 1;
            }
        }
    }
}

/// Concept occurrence counts of one hashtag.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptVector {
    pub hashtag: String,
    pub counts: BTreeMap<String, u64>,
    pub tweets: u64,
    pub discarded: u64,
    pub tokens: u64,
    pub resolved: u64,
    /// Resolved tokens whose sense did not map to a noun.
    pub non_noun: u64,
}

impl ConceptVector {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Frequencies summing to one, or an empty map.
    pub fn frequencies(&self) -> BTreeMap<String, f64> {
        normalize(self.counts.iter().map(|(k, &c)| (k.clone(), c)))
    }

    /// Frequencies over `concepts` only, renormalized.
    pub fn restrict(&self, concepts: &[String]) -> BTreeMap<String, f64> {
        normalize(
            concepts
                .iter()
                .filter_map(|c| self.counts.get(c).map(|&n| (c.clone(), n))),
        )
    }
}

fn normalize(items: impl Iterator<Item = (String, u64)>) -> BTreeMap<String, f64> {
    let items: Vec<(String, u64)> = items.filter(|(_, c)| *c > 0).collect();
    let total: u64 = items.iter().map(|(_, c)| c).sum();
    items
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopConcepts {
    pub concepts: Vec<String>,
    /// Fewer than the requested number of concepts were observed.
    pub short: bool,
}

/// The `k` concepts with the largest total count over all vectors; ties are
/// broken lexicographically.
pub fn select_top_concepts(vectors: &[ConceptVector], k: usize) -> TopConcepts {
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for v in vectors {
        for (c, &n) in &v.counts {
            *totals.entry(c).or_default() += n;
        }
    }
    let mut ranked: Vec<(&str, u64)> = totals.into_iter().filter(|&(_, n)| n > 0).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let short = ranked.len() < k;
    TopConcepts {
        concepts: ranked.into_iter().take(k).map(|(c, _)| c.to_string()).collect(),
        short,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFingerprint {
    pub label: ClassLabel,
    /// Mean restricted frequency per selected concept, in selection order.
    pub vector: Vec<f64>,
    pub members: usize,
    /// Members with no selected concept, left out of the mean.
    pub skipped: usize,
    /// No member contributed.
    pub empty: bool,
}

impl ClassFingerprint {
    /// Index of the largest entry; ties go to the earlier concept.
    pub fn argmax(&self) -> Option<usize> {
        (!self.empty).then(|| {
            self.vector
                .iter()
                .enumerate()
                .fold(0, |b, (i, &v)| if v > self.vector[b] { i } else { b })
        })
    }
}

/// Unweighted mean of the restricted member vectors of every class.
pub fn class_fingerprints(
    assignments: &[(String, ClassLabel)],
    vectors: &[ConceptVector],
    concepts: &[String],
) -> Vec<ClassFingerprint> {
    let by_tag: HashMap<&str, &ConceptVector> = vectors.iter().map(|v| (v.hashtag.as_str(), v)).collect();
    ClassLabel::ALL
        .into_iter()
        .map(|label| {
            let mut sum = vec![0.0; concepts.len()];
            let (mut members, mut used) = (0, 0);
            for (tag, _) in assignments.iter().filter(|(_, l)| *l == label) {
                members += 1;
                let Some(v) = by_tag.get(tag.as_str()) else { continue };
                let r = v.restrict(concepts);
                if r.is_empty() {
                    continue;
                }
                used += 1;
                for (s, c) in sum.iter_mut().zip(concepts) {
                    *s += r.get(c).copied().unwrap_or(0.0);
                }
            }
            if used > 0 {
                sum.iter_mut().for_each(|s| *s /= used as f64);
            } else {
                log::warn!("class {label} has no members with selected concepts");
            }
            ClassFingerprint {
                label,
                vector: sum,
                members,
                skipped: members - used,
                empty: used == 0,
            }
        })
        .collect()
}

/// The `k` most frequent tokens; ties are broken lexicographically.
pub fn top_words<S: AsRef<str>>(tokens: impl IntoIterator<Item = S>, k: usize) -> Vec<(String, u64)> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_ref().to_string()).or_default() += 1;
    }
    let mut v: Vec<(String, u64)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(k);
    v
}
