//! Sliding-median peak detection, isolation and alignment.

use serde::{Deserialize, Serialize};

use crate::ingest::ActivitySeries;
use crate::{Error, Real, Result};

/// How days closer than `half_window` to either end of the series are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgePolicy {
    /// Only days with a complete window are evaluated.
    #[default]
    Strict,
    /// Edge days use the median of the available days and are flagged.
    Truncated,
}

impl std::str::FromStr for EdgePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "truncated" => Ok(Self::Truncated),
            _ => Err(Error::param("edges", format!("expected strict or truncated, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeakParams<T> {
    /// Half-width `L` of the baseline window; the window spans `2L+1` days.
    pub half_window: usize,
    /// Floor applied to the baseline in the denominator.
    pub n_min: T,
    /// Outlier threshold; a peak needs `p > threshold`.
    pub threshold: T,
    /// Peaks closer than this many days to another peak are discarded.
    pub isolation_days: usize,
    pub edges: EdgePolicy,
    /// Whether flagged edge peaks may be selected.
    pub include_edge_peaks: bool,
}

impl<T: Real> Default for PeakParams<T> {
    fn default() -> Self {
        Self {
            half_window: 30,
            n_min: T::lit(10.0),
            threshold: T::lit(10.0),
            isolation_days: 7,
            edges: EdgePolicy::Strict,
            include_edge_peaks: false,
        }
    }
}

impl<T: Real> PeakParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.half_window < 1 {
            return Err(Error::param("half_window", "must be at least 1"));
        }
        if !(self.n_min >= T::one()) {
            return Err(Error::param("n_min", "must be at least 1"));
        }
        if !(self.threshold > T::zero()) || !self.threshold.is_finite() {
            return Err(Error::param("threshold", "must be positive and finite"));
        }
        if self.isolation_days < 1 {
            return Err(Error::param("isolation_days", "must be at least 1"));
        }
        Ok(())
    }

    pub fn window_len(&self) -> usize {
        2 * self.half_window + 1
    }
}

/// A day whose outlier fraction exceeds the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectedPeak<T> {
    pub day: usize,
    pub p: T,
    pub baseline: T,
    /// Set when the baseline came from a truncated window.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord<T> {
    pub hashtag: String,
    pub peak_day: usize,
    pub outlier_fraction: T,
    pub baseline: T,
    pub truncated: bool,
    pub half_span: usize,
    /// `aligned_counts[half_span + r]` is the count at relative day `r`.
    pub aligned_counts: Vec<u64>,
}

impl<T> PeakRecord<T> {
    /// Count at relative day `rel`, if inside the aligned span.
    pub fn at(&self, rel: i64) -> Option<u64> {
        let idx = self.half_span as i64 + rel;
        usize::try_from(idx).ok().and_then(|i| self.aligned_counts.get(i).copied())
    }
}

fn median_sorted<T: Real>(sorted: &[u64]) -> T {
    let n = sorted.len();
    debug_assert!(n > 0);
    if n % 2 == 1 {
        T::from_count(sorted[n / 2])
    } else {
        (T::from_count(sorted[n / 2 - 1]) + T::from_count(sorted[n / 2])) / T::lit(2.0)
    }
}

fn fraction<T: Real>(n: u64, baseline: T, n_min: T) -> T {
    (T::from_count(n) - baseline) / baseline.max(n_min)
}

fn window_bounds(len: usize, i0: usize, half: usize) -> (usize, usize, bool) {
    let lo = i0.saturating_sub(half);
    let hi = (i0 + half).min(len - 1);
    let truncated = i0 < half || i0 + half >= len;
    (lo, hi, truncated)
}

/// Outlier fraction `p(i0)` together with its median baseline.
pub fn outlier_fraction_with_baseline<T: Real>(
    counts: &[u64],
    i0: usize,
    params: &PeakParams<T>,
) -> Result<(T, T, bool)> {
    params.validate()?;
    let len = counts.len();
    let half = params.half_window;
    if i0 >= len {
        return Err(Error::WindowOutOfRange {
            start: i0 as i64 - half as i64,
            end: (i0 + half) as i64,
            len,
        });
    }
    let (lo, hi, truncated) = window_bounds(len, i0, half);
    if truncated && params.edges == EdgePolicy::Strict {
        return Err(Error::WindowOutOfRange {
            start: i0 as i64 - half as i64,
            end: (i0 + half) as i64,
            len,
        });
    }
    let mut w = counts[lo..=hi].to_vec();
    w.sort_unstable();
    let nb = median_sorted::<T>(&w);
    Ok((fraction(counts[i0], nb, params.n_min), nb, truncated))
}

pub fn outlier_fraction<T: Real>(counts: &[u64], i0: usize, params: &PeakParams<T>) -> Result<T> {
    outlier_fraction_with_baseline(counts, i0, params).map(|(p, _, _)| p)
}

/// Median baseline for every evaluable day, in day order. Maintains one
/// sorted window while sliding instead of re-sorting per day.
fn baselines<T: Real>(counts: &[u64], params: &PeakParams<T>) -> Vec<(usize, T, bool)> {
    let len = counts.len();
    let half = params.half_window;
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut window: Vec<u64> = counts[..=half.min(len - 1)].to_vec();
    window.sort_unstable();
    for i0 in 0..len {
        if i0 > 0 {
            let incoming = i0 + half;
            if incoming < len {
                let v = counts[incoming];
                let pos = window.partition_point(|&x| x < v);
                window.insert(pos, v);
            }
            if i0 > half {
                let v = counts[i0 - half - 1];
                let pos = window.partition_point(|&x| x < v);
                window.remove(pos);
            }
        }
        let truncated = i0 < half || i0 + half >= len;
        if truncated && params.edges == EdgePolicy::Strict {
            continue;
        }
        out.push((i0, median_sorted::<T>(&window), truncated));
    }
    out
}

/// All days with `p > threshold`, sorted by day.
pub fn detect_peaks<T: Real>(counts: &[u64], params: &PeakParams<T>) -> Result<Vec<DetectedPeak<T>>> {
    params.validate()?;
    if params.edges == EdgePolicy::Strict && counts.len() < params.window_len() {
        return Err(Error::SeriesTooShort {
            len: counts.len(),
            required: params.window_len(),
        });
    }
    Ok(baselines(counts, params)
        .into_iter()
        .filter_map(|(day, nb, truncated)| {
            let p = fraction(counts[day], nb, params.n_min);
            (p > params.threshold).then_some(DetectedPeak {
                day,
                p,
                baseline: nb,
                truncated,
            })
        })
        .collect())
}

/// Discards every peak that has another peak fewer than `isolation_days`
/// days away, then returns the survivor with the largest `p` (earliest day
/// on ties). Flagged edge peaks take part in isolation but are only
/// selectable when `include_edge_peaks` is set.
pub fn isolate_and_select<T: Real>(
    peaks: &[DetectedPeak<T>],
    params: &PeakParams<T>,
) -> Option<DetectedPeak<T>> {
    let iso = params.isolation_days;
    let mut best: Option<DetectedPeak<T>> = None;
    for (i, pk) in peaks.iter().enumerate() {
        let crowded_before = i > 0 && pk.day - peaks[i - 1].day < iso;
        let crowded_after = i + 1 < peaks.len() && peaks[i + 1].day - pk.day < iso;
        if crowded_before || crowded_after {
            continue;
        }
        if pk.truncated && !params.include_edge_peaks {
            continue;
        }
        if best.is_none_or(|b| pk.p > b.p) {
            best = Some(*pk);
        }
    }
    best
}

/// Re-indexes the series so the peak sits at relative day 0, keeping
/// `half_span` days on each side.
pub fn align_to_peak<T: Real>(
    series: &ActivitySeries,
    peak: &DetectedPeak<T>,
    half_span: usize,
) -> Result<PeakRecord<T>> {
    let len = series.counts.len();
    let start = peak.day as i64 - half_span as i64;
    let end = (peak.day + half_span) as i64;
    if start < 0 || end >= len as i64 {
        return Err(Error::WindowOutOfRange { start, end, len });
    }
    Ok(PeakRecord {
        hashtag: series.hashtag.clone(),
        peak_day: peak.day,
        outlier_fraction: peak.p,
        baseline: peak.baseline,
        truncated: peak.truncated,
        half_span,
        aligned_counts: series.counts[start as usize..=end as usize].to_vec(),
    })
}

/// Detection, isolation, selection and alignment for one series.
pub fn find_peak<T: Real>(
    series: &ActivitySeries,
    params: &PeakParams<T>,
    half_span: usize,
) -> Result<Option<PeakRecord<T>>> {
    let peaks = detect_peaks(&series.counts, params)?;
    match isolate_and_select(&peaks, params) {
        Some(pk) => align_to_peak(series, &pk, half_span).map(Some),
        None => Ok(None),
    }
}
