//! Message parsing, hashtag extraction and daily activity series.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SECONDS_PER_DAY: i64 = 86_400;

/// One message of the corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub user_id: String,
    /// UTC epoch seconds.
    pub timestamp: i64,
    pub text: String,
    pub is_retweet: bool,
    pub retweet_source_user: Option<String>,
    pub reply_to: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawTimestamp {
    Epoch(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct RawTweet {
    id: String,
    user: String,
    ts: RawTimestamp,
    text: String,
    #[serde(default)]
    rt_user: Option<String>,
    #[serde(default)]
    reply_to: Option<String>,
}

#[derive(Serialize)]
struct RawTweetOut<'a> {
    id: &'a str,
    user: &'a str,
    ts: i64,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rt_user: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reply_to: Option<&'a str>,
}

/// Parses an ISO-8601 instant (RFC 3339, or a naive date-time taken as UTC).
pub fn parse_instant(s: &str) -> Option<i64> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc().timestamp());
        }
    }
    None
}

/// Parses a calendar date (`YYYY-MM-DD`) into the epoch second of its UTC
/// midnight. Full instants are accepted and truncated to their UTC day.
pub fn parse_start_date(s: &str) -> Result<i64> {
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight").and_utc().timestamp());
    }
    parse_instant(s)
        .map(|t| t.div_euclid(SECONDS_PER_DAY) * SECONDS_PER_DAY)
        .ok_or_else(|| Error::param("start", format!("cannot parse date `{s}`")))
}

pub fn format_date(epoch: i64) -> String {
    DateTime::<Utc>::from_timestamp(epoch, 0)
        .map(|t| t.format("%Y-%m-%d").to_string())
        .unwrap_or_else(|| epoch.to_string())
}

/// Parses one JSON-Lines record.
pub fn parse_tweet_line(line: &str) -> std::result::Result<TweetRecord, String> {
    let raw: RawTweet = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let timestamp = match raw.ts {
        RawTimestamp::Epoch(t) => t,
        RawTimestamp::Text(s) => parse_instant(&s).ok_or_else(|| format!("bad timestamp `{s}`"))?,
    };
    Ok(TweetRecord {
        tweet_id: raw.id,
        user_id: raw.user,
        timestamp,
        text: raw.text,
        is_retweet: raw.rt_user.is_some(),
        retweet_source_user: raw.rt_user,
        reply_to: raw.reply_to,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadStats {
    pub lines: usize,
    pub malformed: usize,
    pub duplicate_ids: usize,
}

/// Reads a JSON-Lines tweet file. Malformed lines and repeated ids are
/// skipped and counted.
pub fn read_tweets(path: &Path) -> Result<(Vec<TweetRecord>, ReadStats)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut stats = ReadStats::default();
    let mut seen = HashSet::new();
    let mut tweets = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        stats.lines += 1;
        match parse_tweet_line(&line) {
            Ok(t) => {
                if seen.insert(t.tweet_id.clone()) {
                    tweets.push(t);
                } else {
                    stats.duplicate_ids += 1;
                }
            }
            Err(reason) => {
                log::debug!("{}:{}: skipped: {reason}", path.display(), lineno + 1);
                stats.malformed += 1;
            }
        }
    }
    Ok((tweets, stats))
}

pub fn write_tweets(path: &Path, tweets: &[TweetRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for t in tweets {
        let raw = RawTweetOut {
            id: &t.tweet_id,
            user: &t.user_id,
            ts: t.timestamp,
            text: &t.text,
            rt_user: t.retweet_source_user.as_deref(),
            reply_to: t.reply_to.as_deref(),
        };
        let line = serde_json::to_string(&raw).map_err(|e| Error::json(path, e))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn is_tag_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Every maximal `#[a-zA-Z0-9_]*` match with a non-empty body, lowercased and
/// without the `#`, in order of appearance.
pub fn extract_hashtags(text: &str) -> Vec<String> {
    let mut tags = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c != '#' {
            continue;
        }
        let start = i + 1;
        let mut end = start;
        while let Some(&(j, d)) = chars.peek() {
            if !is_tag_char(d) {
                break;
            }
            end = j + d.len_utf8();
            chars.next();
        }
        if end > start {
            tags.push(text[start..end].to_ascii_lowercase());
        }
    }
    tags
}

/// The observation window: `days` UTC calendar days starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationWindow {
    /// Epoch second of the first day's UTC midnight.
    pub start: i64,
    pub days: usize,
}

impl ObservationWindow {
    pub fn new(start: i64, days: usize) -> Result<Self> {
        if days == 0 {
            return Err(Error::param("days", "must be positive"));
        }
        if start.rem_euclid(SECONDS_PER_DAY) != 0 {
            return Err(Error::param("start", "must be a UTC midnight"));
        }
        Ok(Self { start, days })
    }

    /// Day index of an instant; may fall outside `0..days`.
    pub fn day_index(&self, ts: i64) -> i64 {
        (ts - self.start).div_euclid(SECONDS_PER_DAY)
    }

    pub fn contains(&self, ts: i64) -> bool {
        let d = self.day_index(ts);
        d >= 0 && (d as usize) < self.days
    }

    pub fn end(&self) -> i64 {
        self.start + self.days as i64 * SECONDS_PER_DAY
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashtagOccurrence {
    pub hashtag: String,
    pub tweet_id: String,
    pub user_id: String,
    pub day_index: i64,
}

/// One occurrence per distinct hashtag per tweet: a tweet that repeats a tag
/// still counts once toward that tag's activity.
pub fn occurrences<'a>(
    tweets: impl IntoIterator<Item = &'a TweetRecord>,
    window: &ObservationWindow,
) -> Vec<HashtagOccurrence> {
    let mut out = Vec::new();
    for t in tweets {
        let day = window.day_index(t.timestamp);
        let mut seen = BTreeSet::new();
        for tag in extract_hashtags(&t.text) {
            if seen.insert(tag.clone()) {
                out.push(HashtagOccurrence {
                    hashtag: tag,
                    tweet_id: t.tweet_id.clone(),
                    user_id: t.user_id.clone(),
                    day_index: day,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivitySeries {
    pub hashtag: String,
    /// `counts[i]` is the number of tweets containing the tag on day `i`.
    pub counts: Vec<u64>,
    pub distinct_users: usize,
}

impl ActivitySeries {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Accumulates occurrences; shards built independently can be merged in any
/// order.
#[derive(Debug, Clone)]
pub struct SeriesBuilder {
    window_days: usize,
    counts: BTreeMap<String, Vec<u64>>,
    users: BTreeMap<String, HashSet<String>>,
    rejected: usize,
}

impl SeriesBuilder {
    pub fn new(window_days: usize) -> Self {
        Self {
            window_days,
            counts: BTreeMap::new(),
            users: BTreeMap::new(),
            rejected: 0,
        }
    }

    pub fn push(&mut self, occ: &HashtagOccurrence) {
        if occ.day_index < 0 || occ.day_index as usize >= self.window_days {
            self.rejected += 1;
            return;
        }
        let counts = self
            .counts
            .entry(occ.hashtag.clone())
            .or_insert_with(|| vec![0; self.window_days]);
        counts[occ.day_index as usize] += 1;
        self.users
            .entry(occ.hashtag.clone())
            .or_default()
            .insert(occ.user_id.clone());
    }

    pub fn merge(mut self, other: SeriesBuilder) -> Result<Self> {
        if self.window_days != other.window_days {
            return Err(Error::param("window_days", "cannot merge shards of different windows"));
        }
        for (tag, counts) in other.counts {
            let mine = self
                .counts
                .entry(tag)
                .or_insert_with(|| vec![0; other.window_days]);
            for (a, b) in mine.iter_mut().zip(counts) {
                *a += b;
            }
        }
        for (tag, users) in other.users {
            self.users.entry(tag).or_default().extend(users);
        }
        self.rejected += other.rejected;
        Ok(self)
    }

    pub fn finish(self) -> SeriesBuild {
        let users = self.users;
        let series = self
            .counts
            .into_iter()
            .map(|(tag, counts)| {
                let distinct_users = users.get(&tag).map_or(0, HashSet::len);
                let s = ActivitySeries {
                    hashtag: tag.clone(),
                    counts,
                    distinct_users,
                };
                (tag, s)
            })
            .collect();
        SeriesBuild {
            series,
            rejected: self.rejected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBuild {
    pub series: BTreeMap<String, ActivitySeries>,
    /// Occurrences whose day index fell outside the window.
    pub rejected: usize,
}

pub fn build_daily_series<'a>(
    occurrences: impl IntoIterator<Item = &'a HashtagOccurrence>,
    window_days: usize,
) -> SeriesBuild {
    let mut b = SeriesBuilder::new(window_days);
    for o in occurrences {
        b.push(o);
    }
    b.finish()
}

/// Keeps the series used by at least `min_users` distinct users.
pub fn filter_popular(
    series: &BTreeMap<String, ActivitySeries>,
    min_users: usize,
) -> BTreeMap<String, ActivitySeries> {
    series
        .iter()
        .filter(|(_, s)| s.distinct_users >= min_users)
        .map(|(k, s)| (k.clone(), s.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagSummary {
    pub hashtag: String,
    pub distinct_users: usize,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub start: String,
    pub days: usize,
    pub min_users: usize,
    pub read: ReadStats,
    pub out_of_window: usize,
    pub distinct_hashtags: usize,
    pub hashtags: Vec<HashtagSummary>,
}

/// Writes `hashtag,day,count`, one row per day of every series.
pub fn write_series_csv(path: &Path, series: &BTreeMap<String, ActivitySeries>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(["hashtag", "day", "count"])
        .map_err(|e| Error::csv(path, e))?;
    for s in series.values() {
        for (day, c) in s.counts.iter().enumerate() {
            w.write_record([s.hashtag.as_str(), &day.to_string(), &c.to_string()])
                .map_err(|e| Error::csv(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a series CSV. Series length is the largest day index plus one over
/// the whole file, so every series shares one window.
pub fn read_series_csv(path: &Path) -> Result<BTreeMap<String, ActivitySeries>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut rows: Vec<(String, usize, u64)> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let bad = |reason: &str| Error::Malformed {
            what: "series row",
            location: format!("{}:{}", path.display(), i + 2),
            reason: reason.to_string(),
        };
        if rec.len() != 3 {
            return Err(bad("expected hashtag,day,count"));
        }
        let day: usize = rec[1].parse().map_err(|_| bad("bad day"))?;
        let count: u64 = rec[2].parse().map_err(|_| bad("bad count"))?;
        rows.push((rec[0].to_string(), day, count));
    }
    let len = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
    let mut out: BTreeMap<String, ActivitySeries> = BTreeMap::new();
    for (tag, day, count) in rows {
        let s = out.entry(tag.clone()).or_insert_with(|| ActivitySeries {
            hashtag: tag,
            counts: vec![0; len],
            distinct_users: 0,
        });
        s.counts[day] += count;
    }
    Ok(out)
}
