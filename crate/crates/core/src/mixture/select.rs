use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bic, check_points, em_fit, EmParams, MixtureModel};
use crate::{seed, Error, Real, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicRow {
    pub k: usize,
    pub log_likelihood: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub k: usize,
    /// Held-out log density per point, averaged over folds.
    pub mean_heldout: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub best: MixtureModel<T>,
    /// Best-restart fit for every `k`, in `k` order.
    pub fits: Vec<MixtureModel<T>>,
    pub table: Vec<BicRow>,
}

impl<T: Real> Selection<T> {
    pub fn best_k(&self) -> usize {
        self.best.k()
    }
}

/// Best of `restarts` seeded fits; ties keep the lowest restart index.
fn best_of<T: Real>(
    points: &[[T; 2]],
    k: usize,
    restarts: usize,
    seed: u64,
    params: &EmParams<T>,
) -> Result<MixtureModel<T>> {
    let fits: Vec<Result<MixtureModel<T>>> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| em_fit(points, k, seed::derive(seed, "restart", &[k as u64, r as u64]), params))
        .collect();
    let mut best: Option<MixtureModel<T>> = None;
    for fit in fits {
        let fit = fit?;
        if best.as_ref().is_none_or(|b| fit.log_likelihood > b.log_likelihood) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn check_range(k_range: &RangeInclusive<usize>) -> Result<()> {
    if k_range.is_empty() || *k_range.start() == 0 {
        return Err(Error::param("k_range", "must be a non-empty range of positive counts"));
    }
    Ok(())
}

/// Fits every `k` in `k_range` and returns the BIC-maximal model. Ties keep
/// the smaller `k`.
pub fn select_model<T: Real>(
    points: &[[T; 2]],
    k_range: RangeInclusive<usize>,
    restarts: usize,
    seed: u64,
    params: &EmParams<T>,
) -> Result<Selection<T>> {
    check_range(&k_range)?;
    let fits: Vec<MixtureModel<T>> = k_range
        .map(|k| best_of(points, k, restarts, seed, params))
        .collect::<Result<_>>()?;
    let table: Vec<BicRow> = fits
        .iter()
        .map(|m| BicRow {
            k: m.k(),
            log_likelihood: m.log_likelihood.as_f64(),
            bic: bic(m).as_f64(),
        })
        .collect();
    let mut best = 0;
    for (i, row) in table.iter().enumerate() {
        if row.bic > table[best].bic {
            best = i;
        }
    }
    Ok(Selection {
        best: fits[best].clone(),
        fits,
        table,
    })
}

/// `folds`-fold cross-validated held-out log density for every `k`. The
/// split is a seeded shuffle; each training fit keeps the best of
/// `restarts` starts.
pub fn cross_validate<T: Real>(
    points: &[[T; 2]],
    k_range: RangeInclusive<usize>,
    folds: usize,
    restarts: usize,
    seed: u64,
    params: &EmParams<T>,
) -> Result<Vec<CvRow>> {
    check_range(&k_range)?;
    check_points(points)?;
    if folds < 2 {
        return Err(Error::param("folds", "must be at least 2"));
    }
    if points.len() < folds {
        return Err(Error::TooFewPoints {
            required: folds,
            got: points.len(),
        });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut seed::rng(seed::derive(seed, "cv-split", &[])));

    let splits: Vec<(Vec<[T; 2]>, Vec<[T; 2]>)> = (0..folds)
        .map(|f| {
            let mut train = Vec::new();
            let mut test = Vec::new();
            for (pos, &i) in order.iter().enumerate() {
                if pos % folds == f {
                    test.push(points[i]);
                } else {
                    train.push(points[i]);
                }
            }
            (train, test)
        })
        .collect();

    k_range
        .map(|k| {
            let mut total = 0.0;
            for (f, (train, test)) in splits.iter().enumerate() {
                let m = best_of(train, k, restarts, seed::derive(seed, "cv-fit", &[f as u64]), params)?;
                total += m.score(test).as_f64() / test.len() as f64;
            }
            Ok(CvRow {
                k,
                mean_heldout: total / folds as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn blob(center: [f64; 2], sd: f64, n: usize, seed: u64) -> Vec<[f64; 2]> {
        let mut rng = seed::rng(seed);
        let nd = Normal::new(0.0, sd).unwrap();
        (0..n)
            .map(|_| [center[0] + nd.sample(&mut rng), center[1] + nd.sample(&mut rng)])
            .collect()
    }

    #[test]
    fn tight_blob_selects_one() {
        let pts = blob([0.3, 0.3], 0.03, 200, 1);
        let sel = select_model(&pts, 1..=4, 5, 7, &EmParams::default()).unwrap();
        assert_eq!(sel.best_k(), 1);
        assert_eq!(sel.table.len(), 4);
        assert!(sel.table[0].bic > sel.table[1].bic + 5.0);
    }

    #[test]
    fn two_blobs_select_two_and_cv_agrees() {
        let mut pts = blob([0.1, 0.1], 0.03, 200, 2);
        pts.extend(blob([0.6, 0.2], 0.03, 200, 3));
        let sel = select_model(&pts, 1..=4, 5, 7, &EmParams::default()).unwrap();
        assert_eq!(sel.best_k(), 2);
        let cv = cross_validate(&pts, 1..=2, 10, 3, 7, &EmParams::default()).unwrap();
        assert!(cv[1].mean_heldout > cv[0].mean_heldout);
    }

    #[test]
    fn identical_points_cv_prefers_one() {
        let pts = vec![[0.2, 0.2]; 40];
        let cv = cross_validate(&pts, 1..=3, 10, 2, 1, &EmParams::default()).unwrap();
        let best = cv.iter().max_by(|a, b| a.mean_heldout.total_cmp(&b.mean_heldout)).unwrap();
        // Extra components cannot beat the floored point mass.
        assert!(cv[0].mean_heldout >= best.mean_heldout - 1e-9);
    }

    #[test]
    fn selection_is_deterministic() {
        let pts = blob([0.3, 0.3], 0.05, 60, 4);
        let a = select_model(&pts, 1..=3, 4, 11, &EmParams::default()).unwrap();
        let b = select_model(&pts, 1..=3, 4, 11, &EmParams::default()).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn cv_needs_enough_points() {
        let pts = vec![[0.2, 0.2]; 5];
        assert!(matches!(
            cross_validate(&pts, 1..=2, 10, 1, 0, &EmParams::default()),
            Err(Error::TooFewPoints { .. })
        ));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=1;
        assert!(select_model(&pts, empty, 1, 0, &EmParams::default()).is_err());
    }
}
