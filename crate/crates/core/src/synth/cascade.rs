use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::diffusion::FollowerGraph;
use crate::ingest::{ObservationWindow, TweetRecord, SECONDS_PER_DAY};
use crate::mixture::ClassLabel;
use crate::{seed, Error, Result};

/// Relative days covered by a seeding profile.
pub const PROFILE_HALF_SPAN: usize = 7;

/// Exogenous seeders per relative day `-7..=7` for a class archetype.
/// `peak` sets day 0; `flank` scales the shoulders.
pub fn seeding_profile(label: ClassLabel, peak: u64, flank: f64) -> Vec<u64> {
    let h = PROFILE_HALF_SPAN as i64;
    (-h..=h)
        .map(|d| {
            if d == 0 {
                return peak;
            }
            let v = match label {
                ClassLabel::Before if d < 0 => flank * (h + 1 + d) as f64,
                ClassLabel::After if d > 0 => flank * (h + 1) as f64 * 0.5f64.powi(d as i32 - 1),
                ClassLabel::Symmetric => flank * (h + 1 - d.abs()) as f64,
                _ => 0.0,
            };
            v.round() as u64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeConfig {
    pub hashtag: String,
    pub label: ClassLabel,
    /// Absolute window day that relative day 0 maps to.
    pub peak_day: usize,
    /// Exogenous seeders per relative day `-7..=7`.
    pub seeding: Vec<u64>,
    /// Probability that a follower adopts when a followee first posts.
    pub beta: f64,
    /// Mean number of extra posts per adopter.
    pub repeat_rate: f64,
    /// Extra posts fall within this many hours after the first.
    pub jitter_hours: f64,
    /// Probability that an endogenous first post is a retweet of its source.
    pub retweet_prob: f64,
    /// Mean exogenous seeders per day across the whole window.
    pub background_per_day: f64,
    /// Words for the tweet bodies: `(word, weight)`.
    pub vocabulary: Vec<(String, f64)>,
    pub words_per_tweet: usize,
}

impl CascadeConfig {
    pub fn validate(&self, window: &ObservationWindow) -> Result<()> {
        if self.seeding.len() != 2 * PROFILE_HALF_SPAN + 1 {
            return Err(Error::param("seeding", "needs one count per relative day -7..=7"));
        }
        if self.seeding.iter().sum::<u64>() == 0 && self.background_per_day <= 0.0 {
            return Err(Error::param("seeding", "needs a positive total"));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::param("beta", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.retweet_prob) {
            return Err(Error::param("retweet_prob", "must lie in [0, 1]"));
        }
        if !(self.repeat_rate >= 0.0) || !(self.jitter_hours >= 0.0) || !(self.background_per_day >= 0.0) {
            return Err(Error::param("repeat_rate", "rates and jitter must be non-negative"));
        }
        if self.peak_day < PROFILE_HALF_SPAN || self.peak_day + PROFILE_HALF_SPAN >= window.days {
            return Err(Error::param("peak_day", "profile must fit inside the window"));
        }
        if self.vocabulary.iter().any(|(_, w)| !(*w >= 0.0)) {
            return Err(Error::param("vocabulary", "weights must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub hashtag: String,
    pub label: ClassLabel,
    pub beta: f64,
    pub peak_day: usize,
    pub seeders: BTreeSet<String>,
    /// First-post instant of every adopter.
    pub adoption_times: BTreeMap<String, i64>,
}

impl GroundTruth {
    pub fn seeder_fraction(&self) -> f64 {
        self.seeders.len() as f64 / self.adoption_times.len().max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Event {
    /// An exogenous seeder posts.
    Seed,
    /// `user` adopts after exposure by `source`.
    Adopt { user: u32, source: u32 },
}

struct Emitter<'a> {
    hashtag: &'a str,
    vocabulary: &'a [(String, f64)],
    total_weight: f64,
    words_per_tweet: usize,
    next_id: usize,
}

impl Emitter<'_> {
    fn text(&self, rng: &mut impl Rng, prefix: Option<&str>) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if let Some(p) = prefix {
            parts.push(p);
        }
        if self.total_weight > 0.0 {
            for _ in 0..self.words_per_tweet {
                let mut u = rng.random::<f64>() * self.total_weight;
                let mut pick = &self.vocabulary[self.vocabulary.len() - 1].0;
                for (w, weight) in self.vocabulary {
                    if u < *weight {
                        pick = w;
                        break;
                    }
                    u -= weight;
                }
                parts.push(pick);
            }
        }
        let tag = format!("#{}", self.hashtag);
        parts.push(&tag);
        parts.join(" ")
    }

    fn tweet(&mut self, user: &str, ts: i64, text: String, rt_user: Option<String>) -> TweetRecord {
        self.next_id += 1;
        TweetRecord {
            tweet_id: format!("{}-{}", self.hashtag, self.next_id),
            user_id: user.to_string(),
            timestamp: ts,
            text,
            is_retweet: rt_user.is_some(),
            retweet_source_user: rt_user,
            reply_to: None,
        }
    }
}

/// Picks an account that has neither adopted nor been exposed.
fn pick_unexposed(rng: &mut impl Rng, adopted: &[bool], exposed: &[bool]) -> Option<u32> {
    let n = adopted.len();
    let ok = |i: usize| !adopted[i] && !exposed[i];
    for _ in 0..64 {
        let i = rng.random_range(0..n);
        if ok(i) {
            return Some(i as u32);
        }
    }
    let eligible: Vec<usize> = (0..n).filter(|&i| ok(i)).collect();
    (!eligible.is_empty()).then(|| eligible[rng.random_range(0..eligible.len())] as u32)
}

/// Simulates one hashtag cascade over `graph`.
///
/// Exogenous seeders post at uniform times within their day and are drawn
/// from accounts that have not adopted and follow no earlier poster. When an
/// account first posts, each follower that has not adopted converts once with
/// probability `beta`, posting 1 s to 24 h later. Adopters then add
/// Poisson(`repeat_rate`) extra posts within `jitter_hours`. Posts past the
/// end of the window are dropped.
pub fn gen_cascade(
    graph: &FollowerGraph,
    config: &CascadeConfig,
    window: &ObservationWindow,
    seed: u64,
) -> Result<(Vec<TweetRecord>, GroundTruth)> {
    config.validate(window)?;
    let n = graph.n_nodes();
    let mut rng = seed::rng(seed::derive(seed, "cascade", &[]));

    let mut queue: BinaryHeap<Reverse<(i64, u64, Event)>> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |q: &mut BinaryHeap<_>, t: i64, e: Event| {
        seq += 1;
        q.push(Reverse((t, seq, e)));
    };
    let day_start = |d: usize| window.start + d as i64 * SECONDS_PER_DAY;
    for (i, &c) in config.seeding.iter().enumerate() {
        let day = config.peak_day + i - PROFILE_HALF_SPAN;
        for _ in 0..c {
            let t = day_start(day) + rng.random_range(0..SECONDS_PER_DAY);
            push(&mut queue, t, Event::Seed);
        }
    }
    if config.background_per_day > 0.0 {
        let p = Poisson::new(config.background_per_day).expect("positive rate");
        for day in 0..window.days {
            for _ in 0..p.sample(&mut rng) as u64 {
                let t = day_start(day) + rng.random_range(0..SECONDS_PER_DAY);
                push(&mut queue, t, Event::Seed);
            }
        }
    }
    let total_seeds = queue.len();
    if total_seeds > n {
        return Err(Error::param("seeding", format!("{total_seeds} seeders exceed {n} accounts")));
    }

    let mut adopted = vec![false; n];
    let mut exposed = vec![false; n];
    let mut emitter = Emitter {
        hashtag: &config.hashtag,
        vocabulary: &config.vocabulary,
        total_weight: config.vocabulary.iter().map(|(_, w)| w).sum(),
        words_per_tweet: config.words_per_tweet,
        next_id: 0,
    };
    let repeats = (config.repeat_rate > 0.0).then(|| Poisson::new(config.repeat_rate).expect("positive rate"));
    let mut tweets = Vec::new();
    let mut truth = GroundTruth {
        hashtag: config.hashtag.clone(),
        label: config.label,
        beta: config.beta,
        peak_day: config.peak_day,
        seeders: BTreeSet::new(),
        adoption_times: BTreeMap::new(),
    };
    let end = window.end();

    while let Some(Reverse((t, _, event))) = queue.pop() {
        if t >= end {
            break;
        }
        let (user, source) = match event {
            Event::Seed => match pick_unexposed(&mut rng, &adopted, &exposed) {
                Some(u) => (u, None),
                None => return Err(Error::param("seeding", "no unexposed account left to seed")),
            },
            Event::Adopt { user, source } => {
                if adopted[user as usize] {
                    continue;
                }
                (user, Some(source))
            }
        };
        adopted[user as usize] = true;
        let name = graph.name(user);
        truth.adoption_times.insert(name.to_string(), t);
        if source.is_none() {
            truth.seeders.insert(name.to_string());
        }

        let rt_source = source.filter(|_| rng.random::<f64>() < config.retweet_prob);
        let tweet = match rt_source {
            Some(s) => {
                let src = graph.name(s).to_string();
                let text = emitter.text(&mut rng, Some(&format!("RT @{src}:")));
                emitter.tweet(name, t, text, Some(src))
            }
            None => {
                let text = emitter.text(&mut rng, None);
                emitter.tweet(name, t, text, None)
            }
        };
        tweets.push(tweet);

        if let Some(p) = &repeats {
            let k = p.sample(&mut rng) as u64;
            let span = (config.jitter_hours * 3600.0).round() as i64;
            for _ in 0..k {
                let dt = if span > 0 { rng.random_range(1..=span) } else { 0 };
                if t + dt < end {
                    let text = emitter.text(&mut rng, None);
                    tweets.push(emitter.tweet(name, t + dt, text, None));
                }
            }
        }

        for &f in graph.followers(user) {
            if adopted[f as usize] {
                continue;
            }
            exposed[f as usize] = true;
            if config.beta > 0.0 && rng.random::<f64>() < config.beta {
                let delay = rng.random_range(1..=SECONDS_PER_DAY);
                push(&mut queue, t + delay, Event::Adopt { user: f, source: user });
            }
        }
    }
    tweets.sort_by(|a, b| (a.timestamp, &a.tweet_id).cmp(&(b.timestamp, &b.tweet_id)));
    Ok((tweets, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{adoption_fraction, seeder_fraction, AdoptionLog, BetaAttribution};
    use crate::synth::gen_graph;

    fn window() -> ObservationWindow {
        ObservationWindow::new(1_230_768_000, 40).unwrap()
    }

    fn config(label: ClassLabel, seeding: Vec<u64>, beta: f64) -> CascadeConfig {
        CascadeConfig {
            hashtag: "tag".into(),
            label,
            peak_day: 20,
            seeding,
            beta,
            repeat_rate: 0.0,
            jitter_hours: 0.0,
            retweet_prob: 0.0,
            background_per_day: 0.0,
            vocabulary: vec![("word".into(), 1.0)],
            words_per_tweet: 2,
        }
    }

    fn log_of(tweets: &[TweetRecord]) -> AdoptionLog {
        let mut l = AdoptionLog::new("tag");
        for t in tweets {
            l.record(&t.user_id, t.timestamp);
        }
        l
    }

    #[test]
    fn profiles_have_expected_shape() {
        let b = seeding_profile(ClassLabel::Before, 200, 8.0);
        assert_eq!(&b[..8], &[8, 16, 24, 32, 40, 48, 56, 200]);
        assert!(b[8..].iter().all(|&c| c == 0));
        let a = seeding_profile(ClassLabel::After, 200, 8.0);
        assert_eq!(&a[7..10], &[200, 64, 32]);
        let s = seeding_profile(ClassLabel::Symmetric, 200, 8.0);
        assert!((0..15).all(|i| s[i] == s[14 - i]));
        let p = seeding_profile(ClassLabel::PeakDay, 200, 8.0);
        assert_eq!(p.iter().sum::<u64>(), 200);
    }

    #[test]
    fn zero_beta_adopters_are_seeders() {
        let g = gen_graph(2000, 10.0, 1).unwrap();
        let cfg = config(ClassLabel::Symmetric, seeding_profile(ClassLabel::Symmetric, 50, 3.0), 0.0);
        let (tweets, truth) = gen_cascade(&g, &cfg, &window(), 3).unwrap();
        assert_eq!(truth.seeders.len(), truth.adoption_times.len());
        assert_eq!(seeder_fraction(&g, &log_of(&tweets)).unwrap(), 1.0);
    }

    #[test]
    fn star_with_beta_one_infects_every_leaf() {
        let pairs: Vec<(String, String)> = (0..20).map(|i| (format!("leaf{i}"), "hub".to_string())).collect();
        let g = FollowerGraph::from_pairs(pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())));
        let mut seeding = vec![0; 15];
        seeding[7] = 1;
        let cfg = config(ClassLabel::PeakDay, seeding, 1.0);
        // The single seeder is uniform over all accounts; use a seed that
        // picks the hub.
        let (_, truth) = (0..200)
            .map(|s| gen_cascade(&g, &cfg, &window(), s).unwrap())
            .find(|(_, t)| t.seeders.contains("hub"))
            .unwrap();
        assert_eq!(truth.adoption_times.len(), 21);
    }

    #[test]
    fn non_seeders_have_an_earlier_followee_and_gamma_is_exact() {
        let g = gen_graph(3000, 10.0, 4).unwrap();
        let mut cfg = config(ClassLabel::After, seeding_profile(ClassLabel::After, 40, 3.0), 0.08);
        cfg.repeat_rate = 0.5;
        cfg.jitter_hours = 12.0;
        cfg.retweet_prob = 0.3;
        let (tweets, truth) = gen_cascade(&g, &cfg, &window(), 9).unwrap();
        assert!(truth.seeders.len() < truth.adoption_times.len());
        for (user, &t) in &truth.adoption_times {
            if truth.seeders.contains(user) {
                continue;
            }
            let id = g.id(user).unwrap();
            assert!(g
                .followees(id)
                .iter()
                .any(|&v| truth.adoption_times.get(g.name(v)).is_some_and(|&tv| tv < t)));
        }
        let log = log_of(&tweets);
        assert_eq!(log.users.len(), truth.adoption_times.len());
        assert_eq!(seeder_fraction(&g, &log).unwrap(), truth.seeder_fraction());
        assert!(adoption_fraction(&g, &log, BetaAttribution::AllEarlier).unwrap().beta > 0.0);
        assert!(tweets.iter().any(|t| t.text.starts_with("RT @")));
    }

    #[test]
    fn deterministic() {
        let g = gen_graph(1000, 5.0, 4).unwrap();
        let mut cfg = config(ClassLabel::Before, seeding_profile(ClassLabel::Before, 30, 2.0), 0.05);
        cfg.background_per_day = 1.0;
        cfg.repeat_rate = 0.3;
        cfg.jitter_hours = 6.0;
        let a = gen_cascade(&g, &cfg, &window(), 11).unwrap();
        let b = gen_cascade(&g, &cfg, &window(), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn over_seeding_is_an_error() {
        let g = gen_graph(10, 1.0, 0).unwrap();
        let cfg = config(ClassLabel::PeakDay, seeding_profile(ClassLabel::PeakDay, 50, 0.0), 0.0);
        assert!(gen_cascade(&g, &cfg, &window(), 0).is_err());
    }
}
