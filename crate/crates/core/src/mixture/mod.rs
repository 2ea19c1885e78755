//! Diagonal-covariance Gaussian mixtures over `(f_b, f_a)` points.
//!
//! [`em_fit`] fits a single model, [`select_model`] scores a range of
//! component counts by BIC and [`cross_validate`] by held-out likelihood.
//! Components are kept in canonical order (ascending `m_b + m_a`) so a
//! fitted model does not depend on the order in which EM found them.

mod em;
mod label;
mod select;

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

pub use em::{em_fit, em_fit_traced, EmParams, FitTrace};
pub use label::{
    adjusted_rand_index, classify, label_components, Assignment, ClassLabel, ComponentLabels,
    LabelRule,
};
pub use select::{cross_validate, select_model, BicRow, CvRow, Selection};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent<T> {
    pub weight: T,
    pub mean: [T; 2],
    pub variances: [T; 2],
}

impl<T: Real> GaussianComponent<T> {
    pub fn log_density(&self, x: &[T; 2]) -> T {
        let ln_2pi = T::lit((2.0 * std::f64::consts::PI).ln());
        let half = T::lit(0.5);
        let mut acc = T::zero();
        for d in 0..2 {
            let diff = x[d] - self.mean[d];
            acc = acc + ln_2pi + self.variances[d].ln() + diff * diff / self.variances[d];
        }
        -half * acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel<T> {
    pub components: Vec<GaussianComponent<T>>,
    pub log_likelihood: T,
    pub n_points: usize,
    pub n_params: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Free parameters of a `k`-component diagonal model in two dimensions.
pub fn n_params(k: usize) -> usize {
    5 * k - 1
}

pub(crate) fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let m = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<T>().ln()
}

impl<T: Real> MixtureModel<T> {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Log of the mixture density at `x`.
    pub fn log_density(&self, x: &[T; 2]) -> T {
        let terms: Vec<T> = self
            .components
            .iter()
            .map(|c| c.weight.ln() + c.log_density(x))
            .collect();
        log_sum_exp(&terms)
    }

    /// Posterior component probabilities at `x`.
    pub fn posteriors(&self, x: &[T; 2]) -> Result<Vec<T>> {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let terms: Vec<T> = self
            .components
            .iter()
            .map(|c| c.weight.ln() + c.log_density(x))
            .collect();
        let lse = log_sum_exp(&terms);
        Ok(terms.into_iter().map(|t| (t - lse).exp()).collect())
    }

    /// Total log-likelihood of `points` under the model.
    pub fn score(&self, points: &[[T; 2]]) -> T {
        points.iter().map(|x| self.log_density(x)).sum()
    }

    /// Sorts components by `m_b + m_a` (then `m_b`, then weight).
    pub fn canonicalize(&mut self) {
        self.components.sort_by(|a, b| {
            let ka = (a.mean[0] + a.mean[1], a.mean[0], a.weight);
            let kb = (b.mean[0] + b.mean[1], b.mean[0], b.weight);
            ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    pub fn to_f64(&self) -> MixtureModel<f64> {
        MixtureModel {
            components: self
                .components
                .iter()
                .map(|c| GaussianComponent {
                    weight: c.weight.as_f64(),
                    mean: c.mean.map(Real::as_f64),
                    variances: c.variances.map(Real::as_f64),
                })
                .collect(),
            log_likelihood: self.log_likelihood.as_f64(),
            n_points: self.n_points,
            n_params: self.n_params,
            iterations: self.iterations,
            converged: self.converged,
        }
    }
}

/// `2 log L - p ln n`; larger is better.
pub fn bic<T: Real>(model: &MixtureModel<T>) -> T {
    T::lit(2.0) * model.log_likelihood
        - T::from_usize_lossy(model.n_params) * T::from_usize_lossy(model.n_points).ln()
}

pub(crate) fn check_points<T: Real>(points: &[[T; 2]]) -> Result<()> {
    if points.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}
