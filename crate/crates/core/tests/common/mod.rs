//! Independent reference implementations shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hashtag_dynamics::lexicon::{NodeIdx, Taxonomy};

/// Shortest root distance by recursion over parents.
pub fn oracle_depth(t: &Taxonomy, n: NodeIdx, memo: &mut HashMap<NodeIdx, u32>) -> u32 {
    if n == t.root() {
        return 0;
    }
    if let Some(&d) = memo.get(&n) {
        return d;
    }
    let d = 1 + t.parents(n).iter().map(|&p| oracle_depth(t, p, memo)).min().expect("non-root nouns have parents");
    memo.insert(n, d);
    d
}

/// Every node at `depth` on any upward path, by explicit path enumeration.
pub fn oracle_rollup(t: &Taxonomy, n: NodeIdx, depth: u32, memo: &mut HashMap<NodeIdx, u32>) -> BTreeSet<NodeIdx> {
    let mut out = BTreeSet::new();
    let mut paths = vec![vec![n]];
    while let Some(path) = paths.pop() {
        let last = *path.last().unwrap();
        if last == t.root() {
            for &v in &path {
                if oracle_depth(t, v, memo) == depth {
                    out.insert(v);
                }
            }
            continue;
        }
        for &p in t.parents(last) {
            let mut next = path.clone();
            next.push(p);
            paths.push(next);
        }
    }
    out
}

/// `(day, p, baseline, truncated)` of every day with `p > pt`, computed by
/// sorting each window afresh. With `truncated` unset, days whose window
/// leaves the series are skipped.
pub fn brute_force_peaks(counts: &[u64], l: usize, n_min: f64, pt: f64, truncated: bool) -> Vec<(usize, f64, f64, bool)> {
    let mut out = Vec::new();
    for i in 0..counts.len() {
        let edge = i < l || i + l >= counts.len();
        if edge && !truncated {
            continue;
        }
        let lo = i.saturating_sub(l);
        let hi = (i + l).min(counts.len() - 1);
        let mut w: Vec<u64> = counts[lo..=hi].to_vec();
        w.sort();
        let m = w.len();
        let nb = if m % 2 == 1 {
            w[m / 2] as f64
        } else {
            (w[m / 2 - 1] as f64 + w[m / 2] as f64) / 2.0
        };
        let p = (counts[i] as f64 - nb) / nb.max(n_min);
        if p > pt {
            out.push((i, p, nb, edge));
        }
    }
    out
}
