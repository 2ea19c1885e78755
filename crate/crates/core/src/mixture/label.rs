use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MixtureModel;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Before,
    After,
    Symmetric,
    PeakDay,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Before,
        ClassLabel::After,
        ClassLabel::Symmetric,
        ClassLabel::PeakDay,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Before => "Before",
            ClassLabel::After => "After",
            ClassLabel::Symmetric => "Symmetric",
            ClassLabel::PeakDay => "PeakDay",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param("label", format!("unknown class `{s}`")))
    }
}

/// Thresholds mapping a component mean `(m_b, m_a)` to a class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LabelRule<T> {
    /// `m_b + m_a` below this is a peak-day component.
    pub peak_sum: T,
    /// One side must exceed the other by this factor to be asymmetric.
    pub ratio: T,
}

impl<T: Real> Default for LabelRule<T> {
    fn default() -> Self {
        Self {
            peak_sum: T::lit(0.25),
            ratio: T::lit(2.0),
        }
    }
}

impl<T: Real> LabelRule<T> {
    pub fn apply(&self, mean: [T; 2]) -> ClassLabel {
        let [mb, ma] = mean;
        if mb + ma < self.peak_sum {
            ClassLabel::PeakDay
        } else if mb > self.ratio * ma {
            ClassLabel::Before
        } else if ma > self.ratio * mb {
            ClassLabel::After
        } else {
            ClassLabel::Symmetric
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLabels {
    /// Label of each component, in model order.
    pub labels: Vec<ClassLabel>,
    /// Labels given to more than one component.
    pub duplicated: Vec<ClassLabel>,
    /// Labels given to no component.
    pub missing: Vec<ClassLabel>,
}

impl ComponentLabels {
    /// True when every class labels exactly one component.
    pub fn is_canonical(&self) -> bool {
        self.duplicated.is_empty() && self.missing.is_empty()
    }
}

pub fn label_components<T: Real>(model: &MixtureModel<T>, rule: &LabelRule<T>) -> ComponentLabels {
    let labels: Vec<ClassLabel> = model.components.iter().map(|c| rule.apply(c.mean)).collect();
    let mut counts: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    for &l in &labels {
        *counts.entry(l).or_default() += 1;
    }
    let duplicated: Vec<ClassLabel> = counts.iter().filter(|(_, &c)| c > 1).map(|(&l, _)| l).collect();
    let missing = ClassLabel::ALL
        .into_iter()
        .filter(|l| !counts.contains_key(l))
        .collect();
    if !duplicated.is_empty() {
        log::warn!("mixture labels are not unique: {duplicated:?} repeat");
    }
    ComponentLabels {
        labels,
        duplicated,
        missing,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment<T> {
    pub hashtag: String,
    pub posteriors: Vec<T>,
    pub component: usize,
    pub label: ClassLabel,
    /// `1 - max posterior`.
    pub uncertainty: T,
}

/// Posterior assignment of one point; ties go to the lowest component index.
pub fn classify<T: Real>(
    model: &MixtureModel<T>,
    labels: &ComponentLabels,
    hashtag: &str,
    point: [T; 2],
) -> Result<Assignment<T>> {
    if labels.labels.len() != model.k() {
        return Err(Error::param("labels", "one label per component is required"));
    }
    let posteriors = model.posteriors(&point)?;
    let mut component = 0;
    for (j, &p) in posteriors.iter().enumerate() {
        if p > posteriors[component] {
            component = j;
        }
    }
    Ok(Assignment {
        hashtag: hashtag.to_string(),
        uncertainty: T::one() - posteriors[component],
        component,
        label: labels.labels[component],
        posteriors,
    })
}

fn choose2(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index<A: Ord, B: Ord>(a: &[A], b: &[B]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let n = a.len() as u64;
    let mut joint: BTreeMap<(&A, &B), u64> = BTreeMap::new();
    let mut rows: BTreeMap<&A, u64> = BTreeMap::new();
    let mut cols: BTreeMap<&B, u64> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = joint.values().map(|&c| choose2(c)).sum();
    let sa: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sb: f64 = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    if total == 0.0 {
        return 1.0;
    }
    let expected = sa * sb / total;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}
