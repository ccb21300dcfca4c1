//! Group fairness measures over predictions, rankings and residuals.
//!
//! Group `0` is the reference group and group `1` the protected group.
//! Differences are always reference minus protected, so positive values mean
//! the reference group is favored.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::sum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAssignment {
    labels: Vec<u8>,
}

impl GroupAssignment {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(i) = labels.iter().position(|&g| g > 1) {
            return Err(Error::NonBinaryGroup {
                index: i,
                value: f64::from(labels[i]),
            });
        }
        Ok(GroupAssignment { labels })
    }

    /// Groups from a binary sensitive column.
    pub fn from_sensitive(sensitive: &[f64]) -> Result<Self> {
        let labels = sensitive
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                if s == 0.0 {
                    Ok(0)
                } else if s == 1.0 {
                    Ok(1)
                } else {
                    Err(Error::NonBinaryGroup { index: i, value: s })
                }
            })
            .collect::<Result<_>>()?;
        Ok(GroupAssignment { labels })
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn count(&self, group: u8) -> usize {
        self.labels.iter().filter(|&&g| g == group).count()
    }

    /// Labels with 0 and 1 exchanged.
    pub fn swapped(&self) -> Self {
        GroupAssignment {
            labels: self.labels.iter().map(|g| 1 - g).collect(),
        }
    }

    fn check(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.labels.len() {
            return Err(Error::ArityMismatch {
                expected: self.labels.len(),
                got: values.len(),
            });
        }
        for g in [0, 1] {
            if self.count(g) == 0 {
                return Err(Error::EmptyGroup(g));
            }
        }
        Ok(())
    }

    fn values_of<'a>(&'a self, values: &'a [f64], group: u8) -> impl Iterator<Item = f64> + Clone + 'a {
        values
            .iter()
            .zip(&self.labels)
            .filter(move |(_, &g)| g == group)
            .map(|(&v, _)| v)
    }

    fn group_mean(&self, values: &[f64], group: u8) -> f64 {
        sum(self.values_of(values, group)) / self.count(group) as f64
    }
}

/// Mean prediction of group 0 minus mean prediction of group 1.
pub fn mean_difference(predictions: &[f64], groups: &GroupAssignment) -> Result<f64> {
    groups.check(predictions)?;
    Ok(groups.group_mean(predictions, 0) - groups.group_mean(predictions, 1))
}

/// Probability that a random group-0 member scores above a random group-1
/// member, ties counting one half.
///
/// Computed from the Mann–Whitney rank sum with midranks in `O(n log n)`.
/// `1.0` means every reference member outranks every protected member, `0.5`
/// means the ranking carries no group information.
pub fn rank_bias_auc(scores: &[f64], groups: &GroupAssignment) -> Result<f64> {
    groups.check(scores)?;
    if let Some(bad) = scores.iter().find(|v| v.is_nan()) {
        return Err(Error::InvalidDataset(format!("score {bad} cannot be ranked")));
    }
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Twice the midrank is an integer, so the rank sum stays exact.
    let mut doubled_rank_sum_0: u128 = 0;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && scores[order[end + 1]] == scores[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end+1
        let doubled_midrank = (start + 1 + end + 1) as u128;
        let zeros = order[start..=end].iter().filter(|&&i| groups.labels[i] == 0).count() as u128;
        doubled_rank_sum_0 += doubled_midrank * zeros;
        start = end + 1;
    }

    let n0 = groups.count(0) as u128;
    let n1 = groups.count(1) as u128;
    let doubled_u0 = doubled_rank_sum_0 - n0 * (n0 + 1);
    let doubled_pairs = 2 * n0 * n1;
    // Evaluate from the smaller side so that swapping the groups gives
    // exactly the complement.
    let auc = if 2 * doubled_u0 <= doubled_pairs {
        doubled_u0 as f64 / doubled_pairs as f64
    } else {
        1.0 - (doubled_pairs - doubled_u0) as f64 / doubled_pairs as f64
    };
    Ok(auc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupErrors {
    pub mean_signed_residual: f64,
    pub mean_squared_residual: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupErrorProfile {
    pub reference: GroupErrors,
    pub protected: GroupErrors,
}

impl GroupErrorProfile {
    /// Reference minus protected mean signed residual.
    pub fn gap(&self) -> f64 {
        self.reference.mean_signed_residual - self.protected.mean_signed_residual
    }
}

pub fn group_error_profile(residuals: &[f64], groups: &GroupAssignment) -> Result<GroupErrorProfile> {
    groups.check(residuals)?;
    let errors = |g: u8| {
        let count = groups.count(g);
        GroupErrors {
            mean_signed_residual: groups.group_mean(residuals, g),
            mean_squared_residual: sum(groups.values_of(residuals, g).map(|r| r * r)) / count as f64,
            count,
        }
    };
    Ok(GroupErrorProfile {
        reference: errors(0),
        protected: errors(1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairnessReport {
    pub mean_difference: f64,
    pub rank_bias_auc: f64,
    pub group_error_profile: GroupErrorProfile,
}

pub fn fairness_report(predictions: &[f64], residuals: &[f64], groups: &GroupAssignment) -> Result<FairnessReport> {
    Ok(FairnessReport {
        mean_difference: mean_difference(predictions, groups)?,
        rank_bias_auc: rank_bias_auc(predictions, groups)?,
        group_error_profile: group_error_profile(residuals, groups)?,
    })
}
