use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cascade::{gen_cascade, seeding_profile, CascadeConfig, GroundTruth, PROFILE_HALF_SPAN};
use super::graph::gen_graph;
use crate::diffusion::FollowerGraph;
use crate::ingest::{parse_start_date, ObservationWindow, TweetRecord};
use crate::mixture::ClassLabel;
use crate::{seed, Error, Result};

/// Words whose first sense rolls up to one depth-4 concept of the bundled
/// lexicon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedVocabulary {
    pub label: ClassLabel,
    /// Expected concept key, for checking.
    pub concept: String,
    pub words: Vec<String>,
}

fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

pub fn default_planted() -> Vec<PlantedVocabulary> {
    vec![
        PlantedVocabulary {
            label: ClassLabel::Before,
            concept: "time_period.n.00644983".into(),
            words: words(&["year", "decade", "century", "season", "week"]),
        },
        PlantedVocabulary {
            label: ClassLabel::After,
            concept: "evidence.n.00313158".into(),
            words: words(&["testimony", "clue", "sign"]),
        },
        PlantedVocabulary {
            label: ClassLabel::Symmetric,
            concept: "social_event.n.00358630".into(),
            words: words(&["wedding", "celebration", "ceremony", "concert"]),
        },
        PlantedVocabulary {
            label: ClassLabel::PeakDay,
            concept: "symbol.n.00330723".into(),
            words: words(&["symbol", "token"]),
        },
    ]
}

/// A multi-hashtag corpus over one follower graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    /// First day of the window, `YYYY-MM-DD`.
    pub start: String,
    pub days: usize,
    pub users: usize,
    pub mean_followers: f64,
    pub hashtags_per_class: usize,
    /// Exogenous seeders on the peak day.
    pub peak: u64,
    /// Shoulder scale of the seeding profiles.
    pub flank: f64,
    pub beta: f64,
    pub repeat_rate: f64,
    pub jitter_hours: f64,
    pub retweet_prob: f64,
    pub background_per_day: f64,
    pub words_per_tweet: usize,
    /// Share of word draws taken from the class vocabulary.
    pub topical_weight: f64,
    pub filler: Vec<String>,
    pub planted: Vec<PlantedVocabulary>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            start: "2009-06-01".into(),
            days: 120,
            users: 20_000,
            mean_followers: 10.0,
            hashtags_per_class: 25,
            peak: 200,
            flank: 6.0,
            beta: 0.01,
            repeat_rate: 0.2,
            jitter_hours: 6.0,
            retweet_prob: 0.3,
            background_per_day: 1.0,
            words_per_tweet: 4,
            topical_weight: 0.5,
            filler: words(&[
                "love", "dog", "party", "music", "food", "city", "game", "house", "idea", "health",
            ]),
            planted: default_planted(),
        }
    }
}

/// Half-width of the peak detector's baseline window; peaks stay this far
/// from both window ends.
const MARGIN: usize = 31;

impl CorpusConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config {
            path: "<corpus config>".into(),
            reason: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    pub fn window(&self) -> Result<ObservationWindow> {
        ObservationWindow::new(parse_start_date(&self.start)?, self.days)
    }

    pub fn validate(&self) -> Result<()> {
        if self.days < 2 * MARGIN + 1 {
            return Err(Error::param("days", format!("must be at least {}", 2 * MARGIN + 1)));
        }
        if self.hashtags_per_class == 0 {
            return Err(Error::param("hashtags_per_class", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.topical_weight) {
            return Err(Error::param("topical_weight", "must lie in [0, 1]"));
        }
        if self.planted.iter().any(|p| p.words.is_empty()) {
            return Err(Error::param("planted", "every vocabulary needs a word"));
        }
        Ok(())
    }

    fn vocabulary(&self, label: ClassLabel) -> Vec<(String, f64)> {
        let planted: &[String] = self
            .planted
            .iter()
            .find(|p| p.label == label)
            .map_or(&[], |p| p.words.as_slice());
        let mut v = Vec::new();
        let filler_weight = if planted.is_empty() { 1.0 } else { 1.0 - self.topical_weight };
        for w in planted {
            v.push((w.clone(), self.topical_weight / planted.len() as f64));
        }
        for w in &self.filler {
            v.push((w.clone(), filler_weight / self.filler.len() as f64));
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub window: ObservationWindow,
    pub graph: FollowerGraph,
    /// All tweets, ordered by time then id.
    pub tweets: Vec<TweetRecord>,
    /// One entry per hashtag, in hashtag order.
    pub truths: Vec<GroundTruth>,
}

/// Generates `hashtags_per_class` cascades of every class over one graph.
/// Hashtags are named `tag000`, `tag001`, ... in a seeded class order, and
/// peak days are drawn uniformly at least a baseline half-window from both
/// ends of the window.
pub fn gen_corpus(config: &CorpusConfig, seed: u64) -> Result<Corpus> {
    config.validate()?;
    let window = config.window()?;
    let graph = gen_graph(config.users, config.mean_followers, seed::derive(seed, "graph", &[]))?;

    let mut labels: Vec<ClassLabel> = ClassLabel::ALL
        .iter()
        .flat_map(|&l| std::iter::repeat_n(l, config.hashtags_per_class))
        .collect();
    let mut rng = seed::rng(seed::derive(seed, "corpus", &[]));
    labels.shuffle(&mut rng);
    let lo = MARGIN.max(PROFILE_HALF_SPAN);
    let hi = config.days - 1 - MARGIN;
    let cascades: Vec<CascadeConfig> = labels
        .iter()
        .enumerate()
        .map(|(i, &label)| CascadeConfig {
            hashtag: format!("tag{i:03}"),
            label,
            peak_day: rng.random_range(lo..=hi),
            seeding: seeding_profile(label, config.peak, config.flank),
            beta: config.beta,
            repeat_rate: config.repeat_rate,
            jitter_hours: config.jitter_hours,
            retweet_prob: config.retweet_prob,
            background_per_day: config.background_per_day,
            vocabulary: config.vocabulary(label),
            words_per_tweet: config.words_per_tweet,
        })
        .collect();

    let results: Vec<(Vec<TweetRecord>, GroundTruth)> = cascades
        .par_iter()
        .enumerate()
        .map(|(i, c)| gen_cascade(&graph, c, &window, seed::derive(seed, "cascade", &[i as u64])))
        .collect::<Result<_>>()?;
    let mut tweets = Vec::new();
    let mut truths = Vec::new();
    for (t, g) in results {
        tweets.extend(t);
        truths.push(g);
    }
    tweets.sort_by(|a, b| (a.timestamp, &a.tweet_id).cmp(&(b.timestamp, &b.tweet_id)));
    Ok(Corpus {
        window,
        graph,
        tweets,
        truths,
    })
}
