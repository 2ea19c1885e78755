use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{adoption_fraction, seeder_fraction, AdoptionLog, BetaAttribution, EpidemicEstimates, FollowerGraph};
use crate::mixture::ClassLabel;
use crate::{seed, Error, Result};

/// Quantile by linear interpolation between order statistics at position
/// `q (n - 1)`. `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub n: usize,
}

impl FiveNumber {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
            n: v.len(),
        })
    }
}

pub const QUANTITIES: [&str; 4] = ["retweet_fraction", "gamma", "beta", "tau_hours"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    /// Class name to quantity name to box-plot statistics.
    pub classes: BTreeMap<String, BTreeMap<String, FiveNumber>>,
    /// Classes with no member estimates.
    pub empty_classes: Vec<String>,
}

/// Box-plot statistics of every quantity per class. Estimates without a
/// label are ignored; a missing `beta` is left out of that quantity.
pub fn class_summary(estimates: &[EpidemicEstimates]) -> ClassSummary {
    let mut classes = BTreeMap::new();
    let mut empty_classes = Vec::new();
    for label in ClassLabel::ALL {
        let members: Vec<&EpidemicEstimates> = estimates.iter().filter(|e| e.label == Some(label)).collect();
        if members.is_empty() {
            empty_classes.push(label.to_string());
            continue;
        }
        let mut per_q = BTreeMap::new();
        for q in QUANTITIES {
            let vals: Vec<f64> = members
                .iter()
                .filter_map(|e| match q {
                    "retweet_fraction" => Some(e.retweet_fraction),
                    "gamma" => Some(e.gamma),
                    "beta" => e.beta,
                    _ => Some(e.tau_hours),
                })
                .collect();
            if let Some(f) = FiveNumber::of(&vals) {
                per_q.insert(q.to_string(), f);
            }
        }
        classes.insert(label.to_string(), per_q);
    }
    ClassSummary { classes, empty_classes }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsampleRow {
    pub removed_fraction: f64,
    pub hashtag: String,
    pub gamma: f64,
    pub beta: Option<f64>,
}

/// Keeps each edge independently with probability `1 - removed`.
pub fn subsample_edges(graph: &FollowerGraph, removed: f64, seed: u64) -> FollowerGraph {
    let mut rng = seed::rng(seed);
    graph.filter_edges(|_, _| rng.random::<f64>() >= removed)
}

/// Re-estimates `gamma` and `beta` of every log on edge-subsampled graphs.
pub fn subsampling_harness(
    graph: &FollowerGraph,
    logs: &[&AdoptionLog],
    levels: &[f64],
    seed: u64,
    attribution: BetaAttribution,
) -> Result<Vec<SubsampleRow>> {
    if levels.windows(2).any(|w| w[1] <= w[0]) || levels.iter().any(|l| !(0.0..1.0).contains(l)) {
        return Err(Error::param("levels", "must increase strictly within [0, 1)"));
    }
    let mut rows = Vec::new();
    for (i, &level) in levels.iter().enumerate() {
        let g = subsample_edges(graph, level, seed::derive(seed, "subsample", &[i as u64]));
        for log in logs {
            let beta = match adoption_fraction(&g, log, attribution) {
                Ok(b) => Some(b.beta),
                Err(Error::NoFollowers(_)) => None,
                Err(e) => return Err(e),
            };
            rows.push(SubsampleRow {
                removed_fraction: level,
                hashtag: log.hashtag.clone(),
                gamma: seeder_fraction(&g, log)?,
                beta,
            });
        }
    }
    Ok(rows)
}

pub fn default_levels() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_examples() {
        let f = FiveNumber::of(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!((f.min, f.q1, f.median, f.q3, f.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let f = FiveNumber::of(&[7.5]).unwrap();
        assert_eq!((f.min, f.q1, f.median, f.q3, f.max), (7.5, 7.5, 7.5, 7.5, 7.5));
        assert_eq!(quantile(&[0.0, 10.0], 0.25), 2.5);
        assert!(FiveNumber::of(&[]).is_none());
    }

    fn est(label: ClassLabel, beta: f64) -> EpidemicEstimates {
        EpidemicEstimates {
            hashtag: format!("{label}{beta}"),
            label: Some(label),
            n_users: 1,
            n_tweets: 1,
            retweet_fraction: 0.0,
            gamma: 1.0,
            beta: Some(beta),
            tau_hours: 0.0,
            missing_from_graph: 0,
            zero_out_degree: 0,
        }
    }

    #[test]
    fn summary_flags_empty_classes() {
        let s = class_summary(&[est(ClassLabel::Before, 0.1), est(ClassLabel::Before, 0.3)]);
        assert_eq!(s.classes["Before"]["beta"].median, 0.2);
        assert_eq!(s.empty_classes.len(), 3);
    }

    #[test]
    fn harness_levels_and_shape() {
        let g = FollowerGraph::from_pairs([("b", "a"), ("c", "a"), ("c", "b")]);
        let mut log = AdoptionLog::new("h");
        log.record("a", 1);
        log.record("b", 2);
        log.record("c", 3);
        let rows = subsampling_harness(&g, &[&log], &default_levels(), 3, BetaAttribution::AllEarlier).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.windows(2).all(|w| w[1].removed_fraction > w[0].removed_fraction));
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.gamma)));
        assert!(subsampling_harness(&g, &[&log], &[0.5, 0.2], 3, BetaAttribution::AllEarlier).is_err());
    }
}
