//! Before/peak/after activity fractions and their ternary projection.

use serde::{Deserialize, Serialize};

use crate::peaks::PeakRecord;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTriple<T> {
    pub hashtag: String,
    pub f_b: T,
    pub f_p: T,
    pub f_a: T,
}

impl<T: Real> FeatureTriple<T> {
    /// The `(f_b, f_a)` coordinates used for clustering.
    pub fn point(&self) -> [T; 2] {
        [self.f_b, self.f_a]
    }

    /// True when the peak day holds no more activity than the mean day of
    /// the busier flank. A detected peak can never land here.
    pub fn in_excluded_region(&self) -> bool {
        let flank_days = T::lit(7.0);
        self.f_p * flank_days <= self.f_b.max(self.f_a)
    }
}

/// Fractions of the aligned window's activity before, on and after day 0.
pub fn compute_triple<T: Real>(peak: &PeakRecord<T>) -> Result<FeatureTriple<T>> {
    let h = peak.half_span;
    if peak.aligned_counts.len() != 2 * h + 1 {
        return Err(Error::Malformed {
            what: "aligned window",
            location: peak.hashtag.clone(),
            reason: format!("expected {} days, got {}", 2 * h + 1, peak.aligned_counts.len()),
        });
    }
    let before: u64 = peak.aligned_counts[..h].iter().sum();
    let on = peak.aligned_counts[h];
    let after: u64 = peak.aligned_counts[h + 1..].iter().sum();
    let total = before + on + after;
    if total == 0 {
        return Err(Error::EmptyWindow);
    }
    let t = T::from_count(total);
    Ok(FeatureTriple {
        hashtag: peak.hashtag.clone(),
        f_b: T::from_count(before) / t,
        f_p: T::from_count(on) / t,
        f_a: T::from_count(after) / t,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexRow<T> {
    pub hashtag: String,
    pub f_b: T,
    pub f_p: T,
    pub f_a: T,
    pub x: T,
    pub y: T,
}

/// Ternary projection with the before vertex at the origin, the after vertex
/// at `(1, 0)` and the peak vertex at the apex.
pub fn ternary<T: Real>(t: &FeatureTriple<T>) -> (T, T) {
    let half = T::lit(0.5);
    (t.f_a + t.f_p * half, T::lit(3f64.sqrt() / 2.0) * t.f_p)
}

pub fn simplex_coordinates<T: Real>(triples: &[FeatureTriple<T>]) -> Vec<SimplexRow<T>> {
    triples
        .iter()
        .map(|t| {
            let (x, y) = ternary(t);
            SimplexRow {
                hashtag: t.hashtag.clone(),
                f_b: t.f_b,
                f_p: t.f_p,
                f_a: t.f_a,
                x,
                y,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peaks::{detect_peaks, PeakParams};
    use proptest::prelude::*;

    fn record(counts: Vec<u64>) -> PeakRecord<f64> {
        PeakRecord {
            hashtag: "x".into(),
            peak_day: 7,
            outlier_fraction: 20.0,
            baseline: 1.0,
            truncated: false,
            half_span: (counts.len() - 1) / 2,
            aligned_counts: counts,
        }
    }

    fn triple(b: f64, p: f64, a: f64) -> FeatureTriple<f64> {
        FeatureTriple {
            hashtag: "x".into(),
            f_b: b,
            f_p: p,
            f_a: a,
        }
    }

    #[test]
    fn triple_examples() {
        let mut c = vec![0u64; 15];
        c[7] = 9;
        let t = compute_triple(&record(c)).unwrap();
        assert_eq!((t.f_b, t.f_p, t.f_a), (0.0, 1.0, 0.0));

        let mut c = vec![0u64; 15];
        c[0] = 10;
        c[6] = 20;
        c[7] = 50;
        c[14] = 20;
        let t = compute_triple(&record(c)).unwrap();
        assert_eq!((t.f_b, t.f_p, t.f_a), (0.3, 0.5, 0.2));

        let c: Vec<u64> = (0..15).map(|i: i64| 20 - (i - 7).abs() as u64).collect();
        let t = compute_triple(&record(c)).unwrap();
        assert_eq!(t.f_b, t.f_a);

        assert!(matches!(compute_triple(&record(vec![0; 15])), Err(Error::EmptyWindow)));
    }

    #[test]
    fn projection_examples() {
        let (x, y) = ternary(&triple(0.0, 1.0, 0.0));
        assert_eq!((x, y), (0.5, 3f64.sqrt() / 2.0));
        assert_eq!(ternary(&triple(1.0, 0.0, 0.0)), (0.0, 0.0));
        let (x, y) = ternary(&triple(0.3, 0.5, 0.2));
        assert!((x - 0.45).abs() < 1e-15);
        assert!((y - 0.4330127018922193).abs() < 1e-15);
        assert_eq!(simplex_coordinates(&[triple(0.3, 0.5, 0.2)])[0].x, x);
    }

    #[test]
    fn excluded_region_boundary() {
        assert!(triple(0.75, 0.1, 0.15).in_excluded_region());
        assert!(!triple(0.69, 0.1, 0.21).in_excluded_region());
        assert!(!triple(0.0, 1.0, 0.0).in_excluded_region());
    }

    proptest! {
        #[test]
        fn simplex_and_time_reversal(counts in proptest::collection::vec(0u64..1000, 15)) {
            prop_assume!(counts.iter().sum::<u64>() > 0);
            let t = compute_triple(&record(counts.clone())).unwrap();
            prop_assert!((t.f_b + t.f_p + t.f_a - 1.0).abs() <= 1e-12);
            for f in [t.f_b, t.f_p, t.f_a] {
                prop_assert!((0.0..=1.0).contains(&f));
            }
            let mut rev = counts;
            rev.reverse();
            let rev_counts = rev.clone();
            let r = compute_triple(&record(rev)).unwrap();
            prop_assert_eq!(r.f_b, t.f_a);
            prop_assert_eq!(r.f_a, t.f_b);
            prop_assert_eq!(r.f_p, t.f_p);

            let t32 = compute_triple(&PeakRecord::<f32> {
                hashtag: "x".into(), peak_day: 7, outlier_fraction: 20.0, baseline: 1.0,
                truncated: false, half_span: 7, aligned_counts: rev_counts,
            }).unwrap();
            prop_assert!((t32.f_b + t32.f_p + t32.f_a - 1.0).abs() <= 1e-6);
        }

        /// A window whose day 0 clears the threshold over a flat baseline,
        /// with every other day below it, stays outside the excluded region.
        #[test]
        fn detected_peaks_avoid_excluded_region(
            base in 10u64..200,
            flank in proptest::collection::vec(0.0f64..1.0, 14),
            excess in 1u64..1000,
        ) {
            let params = PeakParams::<f64>::default();
            let cap = 11 * base; // (1 + p_t) * baseline
            let mut series = vec![base; 61];
            let peak = cap + excess;
            series[30] = peak;
            let mut j = 0;
            for rel in -7i64..=7 {
                if rel == 0 { continue; }
                series[(30 + rel) as usize] = (flank[j] * cap as f64) as u64;
                j += 1;
            }
            let found = detect_peaks(&series, &params).unwrap();
            prop_assert!(found.iter().any(|p| p.day == 30));
            let rec = record(series[23..=37].to_vec());
            let t = compute_triple(&rec).unwrap();
            prop_assert!(!t.in_excluded_region());
        }
    }
}
