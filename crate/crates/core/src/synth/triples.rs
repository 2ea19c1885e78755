use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::mixture::ClassLabel;
use crate::{seed, Error, Result};

/// A labeled `(f_b, f_a)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub point: [f64; 2],
    pub label: ClassLabel,
}

/// Cluster centres in `(f_b, f_a)` for the four classes.
pub fn default_archetypes() -> Vec<(ClassLabel, [f64; 2])> {
    vec![
        (ClassLabel::Before, [0.45, 0.08]),
        (ClassLabel::After, [0.08, 0.45]),
        (ClassLabel::Symmetric, [0.30, 0.30]),
        (ClassLabel::PeakDay, [0.04, 0.04]),
    ]
}

fn feasible(p: [f64; 2]) -> bool {
    p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0
}

/// Isotropic Gaussian clouds around each archetype, restricted to the
/// feasible triangle `f_b, f_a >= 0, f_b + f_a <= 1` by rejection.
/// Rejection keeps boundary mass off the axes, which clipping would pile up
/// into point masses.
pub fn gen_triple_dataset(
    archetypes: &[(ClassLabel, [f64; 2])],
    per_class: usize,
    spread: f64,
    seed: u64,
) -> Result<Vec<LabeledPoint>> {
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(Error::param("spread", "must be finite and non-negative"));
    }
    let mut rng = seed::rng(seed::derive(seed, "triples", &[]));
    let mut out = Vec::with_capacity(archetypes.len() * per_class);
    for &(label, mean) in archetypes {
        if !feasible(mean) {
            return Err(Error::param("archetypes", format!("mean {mean:?} is outside the simplex")));
        }
        if spread == 0.0 {
            out.extend(std::iter::repeat_n(LabeledPoint { point: mean, label }, per_class));
            continue;
        }
        let noise = Normal::new(0.0, spread).expect("valid spread");
        let mut made = 0;
        while made < per_class {
            let p = [mean[0] + noise.sample(&mut rng), mean[1] + noise.sample(&mut rng)];
            if feasible(p) {
                out.push(LabeledPoint { point: p, label });
                made += 1;
            }
        }
    }
    // Interleave so no caller depends on class order.
    for i in (1..out.len()).rev() {
        let j = rng.random_range(0..=i);
        out.swap(i, j);
    }
    Ok(out)
}
