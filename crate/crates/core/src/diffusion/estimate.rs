use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::FollowerGraph;
use crate::ingest::{extract_hashtags, TweetRecord};
use crate::mixture::ClassLabel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserActivity {
    /// Epoch seconds of the first and last post with the hashtag.
    pub first: i64,
    pub last: i64,
    pub count: u64,
}

/// Per-user first and last use of one hashtag.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdoptionLog {
    pub hashtag: String,
    pub users: BTreeMap<String, UserActivity>,
}

impl AdoptionLog {
    pub fn new(hashtag: impl Into<String>) -> Self {
        Self {
            hashtag: hashtag.into(),
            users: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, user: &str, ts: i64) {
        self.users
            .entry(user.to_string())
            .and_modify(|a| {
                a.first = a.first.min(ts);
                a.last = a.last.max(ts);
                a.count += 1;
            })
            .or_insert(UserActivity {
                first: ts,
                last: ts,
                count: 1,
            });
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }
}

/// Groups tweets by hashtag. Every distinct tag of a tweet counts once.
pub fn group_by_hashtag<'a>(
    tweets: impl IntoIterator<Item = &'a TweetRecord>,
    keep: impl Fn(&str) -> bool,
) -> BTreeMap<String, (AdoptionLog, Vec<&'a TweetRecord>)> {
    let mut out: BTreeMap<String, (AdoptionLog, Vec<&TweetRecord>)> = BTreeMap::new();
    for t in tweets {
        let tags: BTreeSet<String> = extract_hashtags(&t.text).into_iter().collect();
        for tag in tags {
            if !keep(&tag) {
                continue;
            }
            let entry = out
                .entry(tag.clone())
                .or_insert_with(|| (AdoptionLog::new(tag), Vec::new()));
            entry.0.record(&t.user_id, t.timestamp);
            entry.1.push(t);
        }
    }
    out
}

/// Retweet by metadata, or by a leading `RT ` / `RT@` marker in any case.
pub fn is_retweet(t: &TweetRecord) -> bool {
    if t.is_retweet {
        return true;
    }
    let b = t.text.as_bytes();
    b.len() >= 3 && b[..2].eq_ignore_ascii_case(b"rt") && (b[2] == b' ' || b[2] == b'@')
}

pub fn retweet_fraction(tweets: &[&TweetRecord]) -> Result<f64> {
    if tweets.is_empty() {
        return Err(Error::EmptyInput("no tweets for retweet fraction".into()));
    }
    let rts = tweets.iter().filter(|t| is_retweet(t)).count();
    Ok(rts as f64 / tweets.len() as f64)
}

/// Share of adopters none of whose followees used the tag strictly
/// earlier. Users missing from the graph follow no one.
pub fn seeder_fraction(graph: &FollowerGraph, log: &AdoptionLog) -> Result<f64> {
    if log.is_empty() {
        return Err(Error::EmptyInput(format!("adoption log of `{}`", log.hashtag)));
    }
    let first = first_by_id(graph, log);
    let seeders = log
        .users
        .iter()
        .filter(|(name, act)| is_seeder(graph, &first, name, act.first))
        .count();
    Ok(seeders as f64 / log.users.len() as f64)
}

fn first_by_id(graph: &FollowerGraph, log: &AdoptionLog) -> HashMap<u32, i64> {
    log.users
        .iter()
        .filter_map(|(name, a)| graph.id(name).map(|id| (id, a.first)))
        .collect()
}

fn is_seeder(graph: &FollowerGraph, first: &HashMap<u32, i64>, name: &str, t: i64) -> bool {
    match graph.id(name) {
        None => true,
        Some(id) => graph
            .followees(id)
            .iter()
            .all(|v| first.get(v).is_none_or(|&fv| fv >= t)),
    }
}

/// How a follower's adoption is credited to the accounts it follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaAttribution {
    /// Credited to every followee that adopted strictly earlier.
    #[default]
    AllEarlier,
    /// Credited only to the earliest such followee (lowest id on ties).
    FirstExposure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub beta: f64,
    /// Adopters with at least one follower; the mean runs over these.
    pub contributing: usize,
    pub zero_out_degree: usize,
    pub missing_from_graph: usize,
}

/// Mean over adopters with followers of the share of their followers who
/// adopted strictly later.
pub fn adoption_fraction(
    graph: &FollowerGraph,
    log: &AdoptionLog,
    attribution: BetaAttribution,
) -> Result<BetaEstimate> {
    if log.is_empty() {
        return Err(Error::EmptyInput(format!("adoption log of `{}`", log.hashtag)));
    }
    let first = first_by_id(graph, log);
    let missing_from_graph = log.users.len() - first.len();
    let mut credited: HashMap<u32, usize> = HashMap::new();
    if attribution == BetaAttribution::FirstExposure {
        for (&f, &tf) in &first {
            let src = graph
                .followees(f)
                .iter()
                .filter_map(|u| first.get(u).filter(|&&tu| tu < tf).map(|&tu| (tu, *u)))
                .min();
            if let Some((_, u)) = src {
                *credited.entry(u).or_default() += 1;
            }
        }
    }
    let mut ids: Vec<(u32, i64)> = first.iter().map(|(&id, &t)| (id, t)).collect();
    ids.sort_unstable();
    let mut sum = 0.0;
    let mut contributing = 0;
    let mut zero_out_degree = 0;
    for (u, tu) in ids {
        let d = graph.out_degree(u);
        if d == 0 {
            zero_out_degree += 1;
            continue;
        }
        let later = match attribution {
            BetaAttribution::AllEarlier => graph
                .followers(u)
                .iter()
                .filter(|f| first.get(f).is_some_and(|&tf| tf > tu))
                .count(),
            BetaAttribution::FirstExposure => credited.get(&u).copied().unwrap_or(0),
        };
        sum += later as f64 / d as f64;
        contributing += 1;
    }
    if contributing == 0 {
        return Err(Error::NoFollowers(log.hashtag.clone()));
    }
    Ok(BetaEstimate {
        beta: sum / contributing as f64,
        contributing,
        zero_out_degree: zero_out_degree + missing_from_graph,
        missing_from_graph,
    })
}

/// Mean hours between first and last use; single posts contribute 0.
pub fn activity_span(log: &AdoptionLog) -> Result<f64> {
    if log.is_empty() {
        return Err(Error::EmptyInput(format!("adoption log of `{}`", log.hashtag)));
    }
    let total: f64 = log
        .users
        .values()
        .map(|a| (a.last - a.first) as f64 / 3600.0)
        .sum();
    Ok(total / log.users.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpidemicEstimates {
    pub hashtag: String,
    pub label: Option<ClassLabel>,
    pub n_users: usize,
    pub n_tweets: usize,
    pub retweet_fraction: f64,
    pub gamma: f64,
    /// `None` when no adopter has followers.
    pub beta: Option<f64>,
    pub tau_hours: f64,
    pub missing_from_graph: usize,
    pub zero_out_degree: usize,
}

pub fn estimate(
    graph: &FollowerGraph,
    log: &AdoptionLog,
    tweets: &[&TweetRecord],
    label: Option<ClassLabel>,
    attribution: BetaAttribution,
) -> Result<EpidemicEstimates> {
    let gamma = seeder_fraction(graph, log)?;
    let (beta, missing_from_graph, zero_out_degree) = match adoption_fraction(graph, log, attribution) {
        Ok(b) => (Some(b.beta), b.missing_from_graph, b.zero_out_degree),
        Err(Error::NoFollowers(_)) => {
            let missing = log.users.keys().filter(|u| graph.id(u).is_none()).count();
            (None, missing, log.users.len())
        }
        Err(e) => return Err(e),
    };
    let est = EpidemicEstimates {
        hashtag: log.hashtag.clone(),
        label,
        n_users: log.users.len(),
        n_tweets: tweets.len(),
        retweet_fraction: retweet_fraction(tweets)?,
        gamma,
        beta,
        tau_hours: activity_span(log)?,
        missing_from_graph,
        zero_out_degree,
    };
    let unit = |x: f64| (0.0..=1.0).contains(&x);
    if !unit(est.gamma) || !unit(est.retweet_fraction) || !est.beta.is_none_or(unit) || !(est.tau_hours >= 0.0) {
        return Err(Error::Invariant(format!("estimate out of range for `{}`", est.hashtag)));
    }
    Ok(est)
}
