//! Stage file formats.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::features::FeatureTriple;
use crate::mixture::ClassLabel;
use crate::peaks::PeakRecord;
use crate::{Error, Result};

pub fn write_rows<S: Serialize>(path: &Path, rows: impl IntoIterator<Item = S>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Like [`write_rows`] but writes the header even when there are no rows.
pub fn write_table<S: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = S>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_rows<D: DeserializeOwned>(path: &Path) -> Result<Vec<D>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| Error::csv(path, e))).collect()
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

pub const PEAK_HEADER: [&str; 5] = ["hashtag", "peak_day", "p", "baseline", "truncated"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRow {
    pub hashtag: String,
    pub peak_day: usize,
    pub p: f64,
    pub baseline: f64,
    pub truncated: bool,
}

pub const ALIGNED_HEADER: [&str; 3] = ["hashtag", "rel_day", "count"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedRow {
    pub hashtag: String,
    pub rel_day: i64,
    pub count: u64,
}

pub fn write_peaks(dir: &Path, peaks: &[PeakRecord<f64>]) -> Result<()> {
    write_table(
        &dir.join("peaks.csv"),
        &PEAK_HEADER,
        peaks.iter().map(|p| PeakRow {
            hashtag: p.hashtag.clone(),
            peak_day: p.peak_day,
            p: p.outlier_fraction,
            baseline: p.baseline,
            truncated: p.truncated,
        }),
    )?;
    write_table(
        &dir.join("aligned.csv"),
        &ALIGNED_HEADER,
        peaks.iter().flat_map(|p| {
            let h = p.half_span as i64;
            p.aligned_counts.iter().enumerate().map(move |(i, &count)| AlignedRow {
                hashtag: p.hashtag.clone(),
                rel_day: i as i64 - h,
                count,
            })
        }),
    )
}

/// Reads `peaks.csv` and `aligned.csv` back into peak records.
pub fn read_peaks(dir: &Path) -> Result<Vec<PeakRecord<f64>>> {
    let peaks: Vec<PeakRow> = read_rows(&dir.join("peaks.csv"))?;
    let aligned_path = dir.join("aligned.csv");
    let aligned: Vec<AlignedRow> = read_rows(&aligned_path)?;
    let mut by_tag: BTreeMap<String, BTreeMap<i64, u64>> = BTreeMap::new();
    for r in aligned {
        by_tag.entry(r.hashtag).or_default().insert(r.rel_day, r.count);
    }
    peaks
        .into_iter()
        .map(|p| {
            let days = by_tag.remove(&p.hashtag).unwrap_or_default();
            let h = days.keys().next_back().copied().unwrap_or(0);
            let expected: Vec<i64> = (-h..=h).collect();
            if h <= 0 || days.keys().copied().collect::<Vec<_>>() != expected {
                return Err(Error::Malformed {
                    what: "aligned series",
                    location: format!("{}: {}", aligned_path.display(), p.hashtag),
                    reason: "relative days must run from -h to h without gaps".into(),
                });
            }
            Ok(PeakRecord {
                hashtag: p.hashtag,
                peak_day: p.peak_day,
                outlier_fraction: p.p,
                baseline: p.baseline,
                truncated: p.truncated,
                half_span: h as usize,
                aligned_counts: days.into_values().collect(),
            })
        })
        .collect()
}

pub const FEATURE_HEADER: [&str; 4] = ["hashtag", "fb", "fp", "fa"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub hashtag: String,
    pub fb: f64,
    pub fp: f64,
    pub fa: f64,
}

pub fn write_features(path: &Path, triples: &[FeatureTriple<f64>]) -> Result<()> {
    write_table(
        path,
        &FEATURE_HEADER,
        triples.iter().map(|t| FeatureRow {
            hashtag: t.hashtag.clone(),
            fb: t.f_b,
            fp: t.f_p,
            fa: t.f_a,
        }),
    )
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureTriple<f64>>> {
    let rows: Vec<FeatureRow> = read_rows(path)?;
    Ok(rows
        .into_iter()
        .map(|r| FeatureTriple {
            hashtag: r.hashtag,
            f_b: r.fb,
            f_p: r.fp,
            f_a: r.fa,
        })
        .collect())
}

/// One row of `assignments.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentRow {
    pub hashtag: String,
    pub fb: f64,
    pub fa: f64,
    pub label: ClassLabel,
    pub uncertainty: f64,
    pub posteriors: Vec<f64>,
}

pub fn write_assignments(path: &Path, rows: &[AssignmentRow], k: usize) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut header: Vec<String> = ["hashtag", "fb", "fa", "label", "uncertainty"]
        .map(String::from)
        .to_vec();
    header.extend((1..=k).map(|j| format!("posterior_{j}")));
    w.write_record(&header).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        let mut rec = vec![
            r.hashtag.clone(),
            r.fb.to_string(),
            r.fa.to_string(),
            r.label.to_string(),
            r.uncertainty.to_string(),
        ];
        rec.extend(r.posteriors.iter().map(f64::to_string));
        w.write_record(&rec).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_assignments(path: &Path) -> Result<Vec<AssignmentRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let bad = |reason: &str| Error::Malformed {
            what: "assignment row",
            location: format!("{}:{}", path.display(), i + 2),
            reason: reason.to_string(),
        };
        if rec.len() < 5 {
            return Err(bad("expected hashtag,fb,fa,label,uncertainty,posteriors"));
        }
        let num = |j: usize| rec[j].parse::<f64>().map_err(|_| bad("bad number"));
        out.push(AssignmentRow {
            hashtag: rec[0].to_string(),
            fb: num(1)?,
            fa: num(2)?,
            label: rec[3].parse().map_err(|_| bad("bad label"))?,
            uncertainty: num(4)?,
            posteriors: (5..rec.len()).map(num).collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let peaks = vec![PeakRecord {
            hashtag: "a".into(),
            peak_day: 40,
            outlier_fraction: 12.5,
            baseline: 3.0,
            truncated: false,
            half_span: 2,
            aligned_counts: vec![1, 2, 300, 4, 5],
        }];
        write_peaks(dir.path(), &peaks).unwrap();
        assert_eq!(read_peaks(dir.path()).unwrap(), peaks);
        write_peaks(dir.path(), &[]).unwrap();
        assert!(read_peaks(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn assignments_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        let rows = vec![AssignmentRow {
            hashtag: "x".into(),
            fb: 0.1,
            fa: 0.2,
            label: ClassLabel::PeakDay,
            uncertainty: 0.25,
            posteriors: vec![0.75, 0.25],
        }];
        write_assignments(&path, &rows, 2).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("hashtag,fb,fa,label,uncertainty,posterior_1,posterior_2\n"));
        assert_eq!(read_assignments(&path).unwrap(), rows);
    }

    #[test]
    fn features_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let t = vec![FeatureTriple {
            hashtag: "x".into(),
            f_b: 0.3,
            f_p: 0.5,
            f_a: 0.2,
        }];
        write_features(&path, &t).unwrap();
        assert_eq!(read_features(&path).unwrap(), t);
    }
}
