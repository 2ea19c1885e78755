use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_points, n_params, GaussianComponent, MixtureModel};
use crate::{seed, Error, Real, Result};

/// Total responsibility below which a component counts as empty.
const EMPTY_COMPONENT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EmParams<T> {
    /// Stop once an iteration improves the log-likelihood by less than this.
    pub tol: T,
    pub max_iter: usize,
    /// Lower bound on every per-axis variance.
    pub var_floor: T,
}

impl<T: Real> Default for EmParams<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-6),
            max_iter: 1000,
            var_floor: T::lit(1e-6),
        }
    }
}

/// Log-likelihood after the initial E-step and after every M-step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitTrace<T> {
    pub log_likelihoods: Vec<T>,
    /// Indices into `log_likelihoods` whose preceding M-step reinitialized
    /// an empty component.
    pub reinit_at: Vec<usize>,
}

impl<T: Real> FitTrace<T> {
    /// Whether the log-likelihood never dropped by more than `tol`, ignoring
    /// the steps that reinitialized a component.
    pub fn is_monotone(&self, tol: T) -> bool {
        self.log_likelihoods
            .windows(2)
            .enumerate()
            .all(|(i, w)| self.reinit_at.contains(&(i + 1)) || w[1] >= w[0] - tol)
    }
}

struct Prepared<T> {
    log_const: T,
    half_inv: [T; 2],
    mean: [T; 2],
}

fn prepare<T: Real>(c: &GaussianComponent<T>) -> Prepared<T> {
    let ln_2pi = T::lit((2.0 * std::f64::consts::PI).ln());
    let half = T::lit(0.5);
    Prepared {
        log_const: c.weight.ln()
            - half * (ln_2pi + ln_2pi + c.variances[0].ln() + c.variances[1].ln()),
        half_inv: [half / c.variances[0], half / c.variances[1]],
        mean: c.mean,
    }
}

/// Fills `resp` (row-major, `n x k`) with posteriors and `point_ll` with the
/// per-point log density; returns the total log-likelihood.
fn e_step<T: Real>(
    points: &[[T; 2]],
    comps: &[GaussianComponent<T>],
    resp: &mut [T],
    point_ll: &mut [T],
) -> T {
    let k = comps.len();
    let prep: Vec<Prepared<T>> = comps.iter().map(prepare).collect();
    let mut total = T::zero();
    for (i, x) in points.iter().enumerate() {
        let row = &mut resp[i * k..(i + 1) * k];
        let mut m = T::neg_infinity();
        for (r, p) in row.iter_mut().zip(&prep) {
            let d0 = x[0] - p.mean[0];
            let d1 = x[1] - p.mean[1];
            *r = p.log_const - (d0 * d0 * p.half_inv[0] + d1 * d1 * p.half_inv[1]);
            m = m.max(*r);
        }
        let mut s = T::zero();
        for r in row.iter_mut() {
            *r = (*r - m).exp();
            s = s + *r;
        }
        for r in row.iter_mut() {
            *r = *r / s;
        }
        let ll = m + s.ln();
        point_ll[i] = ll;
        total = total + ll;
    }
    total
}

fn axis_variances<T: Real>(points: &[[T; 2]], floor: T) -> [T; 2] {
    let n = T::from_usize_lossy(points.len());
    let mut out = [T::zero(); 2];
    for (d, o) in out.iter_mut().enumerate() {
        let mean = points.iter().map(|p| p[d]).sum::<T>() / n;
        let var = points.iter().map(|p| (p[d] - mean) * (p[d] - mean)).sum::<T>() / n;
        *o = var.max(floor);
    }
    out
}

/// Returns whether any component had to be reinitialized.
fn m_step<T: Real>(
    points: &[[T; 2]],
    comps: &mut [GaussianComponent<T>],
    resp: &[T],
    point_ll: &[T],
    floor: T,
) -> bool {
    let k = comps.len();
    let n = T::from_usize_lossy(points.len());
    let mut reinit = false;
    for (j, c) in comps.iter_mut().enumerate() {
        let nk: T = (0..points.len()).map(|i| resp[i * k + j]).sum();
        if nk < T::lit(EMPTY_COMPONENT) {
            // Move the empty component onto the worst-explained point.
            let worst = point_ll
                .iter()
                .enumerate()
                .fold(0, |b, (i, &v)| if v < point_ll[b] { i } else { b });
            c.mean = points[worst];
            c.variances = axis_variances(points, floor);
            c.weight = T::one() / n;
            reinit = true;
            continue;
        }
        let mut mean = [T::zero(); 2];
        for (i, x) in points.iter().enumerate() {
            let r = resp[i * k + j];
            mean[0] = mean[0] + r * x[0];
            mean[1] = mean[1] + r * x[1];
        }
        mean = mean.map(|m| m / nk);
        let mut var = [T::zero(); 2];
        for (i, x) in points.iter().enumerate() {
            let r = resp[i * k + j];
            var[0] = var[0] + r * (x[0] - mean[0]) * (x[0] - mean[0]);
            var[1] = var[1] + r * (x[1] - mean[1]) * (x[1] - mean[1]);
        }
        c.mean = mean;
        c.variances = var.map(|v| (v / nk).max(floor));
        c.weight = nk / n;
    }
    let wsum: T = comps.iter().map(|c| c.weight).sum();
    for c in comps.iter_mut() {
        c.weight = c.weight / wsum;
    }
    reinit
}

/// k-means++ seeding of the means from the data.
fn init<T: Real>(points: &[[T; 2]], k: usize, floor: T, rng: &mut impl Rng) -> Vec<GaussianComponent<T>> {
    let n = points.len();
    let mut means = vec![points[rng.random_range(0..n)]];
    let mut d2: Vec<f64> = vec![f64::INFINITY; n];
    while means.len() < k {
        let last = means[means.len() - 1];
        for (d, p) in d2.iter_mut().zip(points) {
            let dx = (p[0] - last[0]).as_f64();
            let dy = (p[1] - last[1]).as_f64();
            *d = d.min(dx * dx + dy * dy);
        }
        let total: f64 = d2.iter().sum();
        let idx = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if u < d {
                    pick = i;
                    break;
                }
                u -= d;
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        means.push(points[idx]);
    }
    let variances = axis_variances(points, floor);
    let w = T::one() / T::from_usize_lossy(k);
    means
        .into_iter()
        .map(|mean| GaussianComponent {
            weight: w,
            mean,
            variances,
        })
        .collect()
}

/// Fits a `k`-component diagonal mixture by EM from one seeded start.
pub fn em_fit<T: Real>(points: &[[T; 2]], k: usize, seed: u64, params: &EmParams<T>) -> Result<MixtureModel<T>> {
    em_fit_traced(points, k, seed, params).map(|(m, _)| m)
}

pub fn em_fit_traced<T: Real>(
    points: &[[T; 2]],
    k: usize,
    seed: u64,
    params: &EmParams<T>,
) -> Result<(MixtureModel<T>, FitTrace<T>)> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if points.len() < k {
        return Err(Error::TooFewPoints {
            required: k,
            got: points.len(),
        });
    }
    check_points(points)?;
    if !(params.var_floor > T::zero()) {
        return Err(Error::param("var_floor", "must be positive"));
    }

    let mut rng = seed::rng(seed);
    let mut comps = init(points, k, params.var_floor, &mut rng);
    let n = points.len();
    let mut resp = vec![T::zero(); n * k];
    let mut point_ll = vec![T::zero(); n];
    let mut trace = FitTrace::default();

    let mut ll = e_step(points, &comps, &mut resp, &mut point_ll);
    trace.log_likelihoods.push(ll);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;
        let reinit = m_step(points, &mut comps, &resp, &point_ll, params.var_floor);
        let next = e_step(points, &comps, &mut resp, &mut point_ll);
        trace.log_likelihoods.push(next);
        if reinit {
            trace.reinit_at.push(trace.log_likelihoods.len() - 1);
        }
        let improvement = next - ll;
        ll = next;
        if !reinit && improvement < params.tol {
            converged = true;
            break;
        }
    }
    if !ll.is_finite() {
        return Err(Error::Invariant("EM produced a non-finite log-likelihood".into()));
    }
    let mut model = MixtureModel {
        components: comps,
        log_likelihood: ll,
        n_points: n,
        n_params: n_params(k),
        iterations,
        converged,
    };
    model.canonicalize();
    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> EmParams<f64> {
        EmParams::default()
    }

    #[test]
    fn identical_points_single_component() {
        let pts = vec![[0.3, 0.4]; 25];
        let m = em_fit(&pts, 1, 1, &params()).unwrap();
        assert!((m.components[0].mean[0] - 0.3).abs() < 1e-12);
        assert!((m.components[0].mean[1] - 0.4).abs() < 1e-12);
        assert_eq!(m.components[0].variances, [1e-6, 1e-6]);
        assert!(m.log_likelihood.is_finite());
    }

    #[test]
    fn single_component_is_closed_form() {
        let pts = [[0.1, 0.5], [0.3, 0.2], [0.2, 0.2], [0.6, 0.1]];
        let m = em_fit(&pts, 1, 9, &params()).unwrap();
        let c = &m.components[0];
        assert!((c.mean[0] - 0.3).abs() < 1e-12);
        assert!((c.mean[1] - 0.25).abs() < 1e-12);
        let vb = (0.04 + 0.0 + 0.01 + 0.09) / 4.0;
        let va = (0.0625 + 0.0025 + 0.0025 + 0.0225) / 4.0;
        assert!((c.variances[0] - vb).abs() < 1e-12);
        assert!((c.variances[1] - va).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let pts = [[0.1, 0.1]];
        assert!(matches!(em_fit(&pts, 2, 0, &params()), Err(Error::TooFewPoints { .. })));
        assert!(em_fit(&pts, 0, 0, &params()).is_err());
        assert!(matches!(em_fit(&[[f64::NAN, 0.0]], 1, 0, &params()), Err(Error::NonFinite)));
    }

    #[test]
    fn deterministic_given_seed() {
        let pts: Vec<[f64; 2]> = (0..50).map(|i| [(i % 7) as f64 / 10.0, (i % 5) as f64 / 10.0]).collect();
        let a = em_fit(&pts, 3, 42, &params()).unwrap();
        let b = em_fit(&pts, 3, 42, &params()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_component_is_reinitialized() {
        // Two far clusters and three components: duplicate means coincide
        // and one can starve.
        let mut pts = vec![[0.0, 0.0]; 30];
        pts.extend(vec![[1.0, 1.0]; 30]);
        for seed in 0..20 {
            let (m, trace) = em_fit_traced(&pts, 3, seed, &params()).unwrap();
            assert!(m.log_likelihood.is_finite());
            assert!(trace.is_monotone(1e-9));
            let w: f64 = m.components.iter().map(|c| c.weight).sum();
            assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn f32_fit_runs() {
        let pts: Vec<[f32; 2]> = (0..40).map(|i| [(i % 4) as f32 / 10.0, (i % 3) as f32 / 10.0]).collect();
        let m = em_fit(&pts, 2, 3, &EmParams::<f32>::default()).unwrap();
        assert!(m.log_likelihood.is_finite());
    }
}
