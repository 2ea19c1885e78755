//! Plot-ready tables built from the stage outputs. Each table is skipped,
//! with a notice, when the stage it needs has not produced its files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::io::{self, PeakRow};
use super::stages::FingerprintFile;
use crate::diffusion::ClassSummary;
use crate::features::SimplexRow;
use crate::ingest::{extract_hashtags, format_date, read_series_csv, ObservationWindow, TweetRecord};
use crate::mixture::ClassLabel;
use crate::{Error, Result};

pub const ACTIVITY_HEADER: [&str; 5] = ["hashtag", "label", "day", "date", "count"];
pub const RASTER_HEADER: [&str; 6] = ["hashtag", "user_rank", "user", "day", "rel_day", "first_use"];
pub const SIMPLEX_HEADER: [&str; 7] = ["hashtag", "label", "f_b", "f_p", "f_a", "x", "y"];
pub const FINGERPRINT_HEADER: [&str; 4] = ["class", "concept", "rank", "value"];
pub const QUARTILE_HEADER: [&str; 7] = ["class", "quantity", "min", "q1", "median", "q3", "max"];
pub const WORDS_HEADER: [&str; 4] = ["class", "rank", "word", "count"];

/// Which tables were written and which were skipped.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PlotOutcome {
    pub written: Vec<String>,
    pub skipped: Vec<(String, String)>,
}

impl PlotOutcome {
    fn skip(&mut self, name: &str, why: String) {
        log::warn!("plots: {name} skipped: {why}");
        self.skipped.push((name.to_string(), why));
    }
}

fn labels(out_root: &Path) -> Result<Option<BTreeMap<String, ClassLabel>>> {
    let path = out_root.join("classify/assignments.csv");
    if !path.exists() {
        return Ok(None);
    }
    Ok(Some(
        io::read_assignments(&path)?
            .into_iter()
            .map(|r| (r.hashtag, r.label))
            .collect(),
    ))
}

fn label_str(labels: &Option<BTreeMap<String, ClassLabel>>, tag: &str) -> &'static str {
    labels
        .as_ref()
        .and_then(|l| l.get(tag))
        .map_or("", |l| l.as_str())
}

#[derive(Serialize)]
struct RasterRow<'a> {
    hashtag: &'a str,
    user_rank: usize,
    user: &'a str,
    day: i64,
    rel_day: i64,
    first_use: bool,
}

/// Users of each peaked hashtag ranked by first use (ties by user id), one
/// row per day on which the user posted it. `rel_day` is relative to the
/// hashtag's peak.
pub fn write_raster(
    path: &Path,
    tweets: &[TweetRecord],
    window: &ObservationWindow,
    peaks: &[PeakRow],
) -> Result<()> {
    let peak_day: BTreeMap<&str, i64> = peaks.iter().map(|p| (p.hashtag.as_str(), p.peak_day as i64)).collect();
    // hashtag -> user -> (first instant, posting days)
    let mut users: BTreeMap<&str, BTreeMap<&str, (i64, std::collections::BTreeSet<i64>)>> = BTreeMap::new();
    for t in tweets.iter().filter(|t| window.contains(t.timestamp)) {
        let day = window.day_index(t.timestamp);
        for tag in extract_hashtags(&t.text) {
            let Some((&key, _)) = peak_day.get_key_value(tag.as_str()) else { continue };
            let e = users
                .entry(key)
                .or_default()
                .entry(t.user_id.as_str())
                .or_insert((t.timestamp, Default::default()));
            e.0 = e.0.min(t.timestamp);
            e.1.insert(day);
        }
    }
    let mut rows = Vec::new();
    for (tag, by_user) in &users {
        let mut ranked: Vec<(&&str, &(i64, _))> = by_user.iter().collect();
        ranked.sort_by(|a, b| a.1 .0.cmp(&b.1 .0).then_with(|| a.0.cmp(b.0)));
        for (rank, (user, (first, days))) in ranked.into_iter().enumerate() {
            let first_day = window.day_index(*first);
            for &d in days {
                rows.push(RasterRow {
                    hashtag: tag,
                    user_rank: rank + 1,
                    user,
                    day: d,
                    rel_day: d - peak_day[tag],
                    first_use: d == first_day,
                });
            }
        }
    }
    io::write_table(path, &RASTER_HEADER, rows)
}

/// Class rows of the fingerprint matrix, each normalized to sum to one.
/// Empty classes and all-zero rows are left out.
pub fn fingerprint_matrix(fp: &FingerprintFile) -> Vec<(ClassLabel, Vec<f64>)> {
    fp.classes
        .iter()
        .filter(|c| !c.empty)
        .filter_map(|c| {
            let total: f64 = c.vector.iter().sum();
            (total > 0.0).then(|| (c.label, c.vector.iter().map(|v| v / total).collect()))
        })
        .collect()
}

/// Writes the plot tables of every stage present under `out_root` into
/// `out_root/plots`.
pub fn emit_plotdata(
    out_root: &Path,
    tweets: Option<&[TweetRecord]>,
    window: &ObservationWindow,
) -> Result<PlotOutcome> {
    let dir = out_root.join("plots");
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut outcome = PlotOutcome::default();
    let labels = labels(out_root)?;

    let series_path = out_root.join("ingest/series.csv");
    if series_path.exists() {
        let series = read_series_csv(&series_path)?;
        let day_secs = 86_400;
        io::write_table(
            &dir.join("activity.csv"),
            &ACTIVITY_HEADER,
            series.values().flat_map(|s| {
                let label = label_str(&labels, &s.hashtag);
                s.counts.iter().enumerate().map(move |(d, &c)| {
                    (&s.hashtag, label, d, format_date(window.start + d as i64 * day_secs), c)
                })
            }),
        )?;
        outcome.written.push("activity.csv".into());
    } else {
        outcome.skip("activity.csv", "no ingest output".into());
    }

    let peaks_path = out_root.join("peaks/peaks.csv");
    match (tweets, peaks_path.exists()) {
        (Some(tweets), true) => {
            let peaks: Vec<PeakRow> = io::read_rows(&peaks_path)?;
            write_raster(&dir.join("raster.csv"), tweets, window, &peaks)?;
            outcome.written.push("raster.csv".into());
        }
        (None, _) => outcome.skip("raster.csv", "no tweet log".into()),
        (_, false) => outcome.skip("raster.csv", "no peaks output".into()),
    }

    let simplex_path = out_root.join("features/simplex.csv");
    if simplex_path.exists() {
        let rows: Vec<SimplexRow<f64>> = io::read_rows(&simplex_path)?;
        io::write_table(
            &dir.join("simplex.csv"),
            &SIMPLEX_HEADER,
            rows.iter()
                .map(|r| (&r.hashtag, label_str(&labels, &r.hashtag), r.f_b, r.f_p, r.f_a, r.x, r.y)),
        )?;
        outcome.written.push("simplex.csv".into());
    } else {
        outcome.skip("simplex.csv", "no features output".into());
    }

    let fp_path = out_root.join("semantics/fingerprints.json");
    if fp_path.exists() {
        let fp: FingerprintFile = io::read_json(&fp_path)?;
        let matrix = fingerprint_matrix(&fp);
        io::write_table(
            &dir.join("fingerprint_matrix.csv"),
            &FINGERPRINT_HEADER,
            matrix.iter().flat_map(|(label, row)| {
                fp.concepts
                    .iter()
                    .zip(row)
                    .enumerate()
                    .map(move |(i, (c, v))| (label, c, i + 1, v))
            }),
        )?;
        outcome.written.push("fingerprint_matrix.csv".into());
    } else {
        outcome.skip("fingerprint_matrix.csv", "no semantics output".into());
    }

    let words_path = out_root.join("semantics/top_words.csv");
    if words_path.exists() {
        std::fs::copy(&words_path, dir.join("words.csv")).map_err(|e| Error::io(&words_path, e))?;
        outcome.written.push("words.csv".into());
    } else {
        outcome.skip("words.csv", "no semantics output".into());
    }

    let q_path = out_root.join("diffusion/quartiles.json");
    if q_path.exists() {
        let q: ClassSummary = io::read_json(&q_path)?;
        io::write_table(
            &dir.join("quartiles.csv"),
            &QUARTILE_HEADER,
            q.classes.iter().flat_map(|(class, per_q)| {
                per_q
                    .iter()
                    .map(move |(name, f)| (class, name, f.min, f.q1, f.median, f.q3, f.max))
            }),
        )?;
        outcome.written.push("quartiles.csv".into());
    } else {
        outcome.skip("quartiles.csv", "no diffusion output".into());
    }
    Ok(outcome)
}
