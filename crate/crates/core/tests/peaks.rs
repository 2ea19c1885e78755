mod common;

use hashtag_dynamics::peaks::{detect_peaks, isolate_and_select, EdgePolicy, PeakParams};
use proptest::prelude::*;

fn params(l: usize, n_min: f64, pt: f64, truncated: bool) -> PeakParams<f64> {
    PeakParams {
        half_window: l,
        n_min,
        threshold: pt,
        edges: if truncated { EdgePolicy::Truncated } else { EdgePolicy::Strict },
        ..PeakParams::default()
    }
}

proptest! {
    #[test]
    fn matches_brute_force(
        counts in prop::collection::vec(prop_oneof![4 => 0u64..30, 1 => 0u64..2000], 10..120),
        l in 1usize..12,
        n_min in 1.0f64..20.0,
        pt in 0.5f64..15.0,
        truncated: bool,
    ) {
        let p = params(l, n_min, pt, truncated);
        prop_assume!(truncated || counts.len() >= p.window_len());
        let got: Vec<_> = detect_peaks(&counts, &p)
            .unwrap()
            .into_iter()
            .map(|d| (d.day, d.p, d.baseline, d.truncated))
            .collect();
        prop_assert_eq!(got, common::brute_force_peaks(&counts, l, n_min, pt, truncated));
    }

    #[test]
    fn selected_peak_is_isolated(
        counts in prop::collection::vec(prop_oneof![4 => 0u64..30, 1 => 0u64..2000], 70..150),
        iso in 1usize..10,
    ) {
        let p = PeakParams { isolation_days: iso, ..params(30, 10.0, 10.0, false) };
        let peaks = detect_peaks(&counts, &p).unwrap();
        if let Some(best) = isolate_and_select(&peaks, &p) {
            prop_assert!(peaks.iter().all(|o| o.day == best.day || o.day.abs_diff(best.day) >= iso));
            prop_assert!(best.p > 10.0);
        }
    }
}

#[test]
fn short_series_is_rejected_in_strict_mode() {
    assert!(detect_peaks(&[1u64; 60], &PeakParams::<f64>::default()).is_err());
    let p = params(30, 10.0, 10.0, true);
    let mut counts = vec![0u64; 20];
    counts[3] = 500;
    let found = detect_peaks(&counts, &p).unwrap();
    assert_eq!(found.len(), 1);
    assert!(found[0].truncated);
    assert_eq!(found[0].p, 50.0);
}
