//! Omitted-variable bias and model sanitization.
//!
//! When the sensitive attribute `s` is left out of a regression on features
//! correlated with it, the fitted feature coefficients absorb part of its
//! effect. For one feature the distortion is
//!
//! ```text
//! b̂₁ = b₁ + Δ,   b̂₀ = b₀ + β·s̄ − Δ·x̄,   Δ = β·Cov(x, s) / Var(x)
//! ```
//!
//! With several features the same identity holds with `Δ_j = β·γ_j`, where
//! `γ` are the slopes of an auxiliary regression of `s` on all features.
//!
//! Sanitization goes the other way: fit the full model including `s`, then
//! replace the `β·s` term by a constant `c` that is the same for everybody.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dataset::{summarize, Dataset, SummaryStats};
use crate::error::{Error, Result};
use crate::ols::{self, LinearModel};

/// Omitted-variable bias of feature `feature_index`: `β·Cov(x_j, s)/Var(x_j)`.
pub fn ovb_delta(stats: &SummaryStats, beta: f64, feature_index: usize) -> Result<f64> {
    let var = *stats.feature_variances.get(feature_index).ok_or(Error::ArityMismatch {
        expected: stats.feature_variances.len(),
        got: feature_index + 1,
    })?;
    if var <= 0.0 {
        return Err(Error::ZeroVariance(feature_index));
    }
    Ok(beta * stats.cov_feature_sensitive[feature_index] / var)
}

/// Predicted versus observed effect of dropping the sensitive attribute.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    pub delta: Vec<f64>,
    pub beta: f64,
    pub predicted_omitted_intercept: f64,
    pub predicted_omitted_coefficients: Vec<f64>,
    pub empirical_omitted_intercept: f64,
    pub empirical_omitted_coefficients: Vec<f64>,
    /// Largest absolute difference between predicted and empirical
    /// coefficients, intercept included.
    pub agreement: f64,
    /// Set when `k > 1`, where Δ comes from the auxiliary regression rather
    /// than the single-feature moment formula.
    pub extended_beyond_univariate: bool,
}

/// Everything [`bias_report`] computes, including the two fitted models.
#[derive(Debug, Clone)]
pub struct BiasAnalysis {
    pub full: LinearModel,
    pub omitted: LinearModel,
    pub stats: SummaryStats,
    pub report: BiasReport,
}

pub fn bias_report(d: &Dataset) -> Result<BiasReport> {
    analyze(d).map(|a| a.report)
}

/// Fits the full and omitted models and reconciles them.
pub fn analyze(d: &Dataset) -> Result<BiasAnalysis> {
    let full = ols::fit(d, true)?;
    let omitted = ols::fit(d, false)?;
    let stats = summarize(d);
    let beta = full.sensitive_coefficient().expect("full fit has a sensitive term");

    let delta = if d.k() == 1 {
        vec![ovb_delta(&stats, beta, 0)?]
    } else {
        auxiliary_slopes(d)?.into_iter().map(|g| beta * g).collect()
    };

    let predicted_omitted_coefficients: Vec<f64> =
        full.coefficients().iter().zip(&delta).map(|(b, dl)| b + dl).collect();
    let predicted_omitted_intercept = full.intercept() + beta * stats.sensitive_mean
        - delta
            .iter()
            .zip(&stats.feature_means)
            .map(|(dl, m)| dl * m)
            .sum::<f64>();

    let agreement = std::iter::once((predicted_omitted_intercept, omitted.intercept()))
        .chain(
            predicted_omitted_coefficients
                .iter()
                .copied()
                .zip(omitted.coefficients().iter().copied()),
        )
        .map(|(p, e)| (p - e).abs())
        .fold(0.0, f64::max);

    let report = BiasReport {
        delta,
        beta,
        predicted_omitted_intercept,
        predicted_omitted_coefficients,
        empirical_omitted_intercept: omitted.intercept(),
        empirical_omitted_coefficients: omitted.coefficients().to_vec(),
        agreement,
        extended_beyond_univariate: d.k() > 1,
    };
    Ok(BiasAnalysis {
        full,
        omitted,
        stats,
        report,
    })
}

/// Slopes of the OLS regression of `s` on the features (with intercept).
fn auxiliary_slopes(d: &Dataset) -> Result<Vec<f64>> {
    let x = ols::design_matrix(d, false);
    ols::condition_estimate(&x)?;
    let s = DVector::from_column_slice(d.sensitive());
    let gamma = ols::qr_solve(&x, &s)?;
    Ok(gamma.as_slice()[1..].to_vec())
}

/// Which group's historical treatment is taken as correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SanitizationPolicy {
    /// `c = 0`: the reference group (`s = 0`) was treated correctly.
    ReferenceCorrect,
    /// `c = β`: the protected group (`s = 1`) was treated correctly.
    ProtectedCorrect,
    /// `c = s̄·β`: a population-weighted compromise. Also defined for numeric
    /// sensitive attributes.
    #[default]
    PopulationMean,
}

impl SanitizationPolicy {
    pub const ALL: [SanitizationPolicy; 3] = [
        SanitizationPolicy::ReferenceCorrect,
        SanitizationPolicy::ProtectedCorrect,
        SanitizationPolicy::PopulationMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SanitizationPolicy::ReferenceCorrect => "reference_correct",
            SanitizationPolicy::ProtectedCorrect => "protected_correct",
            SanitizationPolicy::PopulationMean => "population_mean",
        }
    }

    /// The constant substituted for `β·s`.
    pub fn constant(self, beta: f64, stats: &SummaryStats) -> f64 {
        match self {
            SanitizationPolicy::ReferenceCorrect => 0.0,
            SanitizationPolicy::ProtectedCorrect => beta,
            SanitizationPolicy::PopulationMean => stats.sensitive_mean * beta,
        }
    }
}

impl std::str::FromStr for SanitizationPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            format!("unknown policy `{s}` (expected reference_correct, protected_correct or population_mean)")
        })
    }
}

impl std::fmt::Display for SanitizationPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Replaces the `β·s` term of a full model with the policy's constant.
pub fn sanitize(full_model: &LinearModel, policy: SanitizationPolicy, stats: &SummaryStats) -> Result<LinearModel> {
    let beta = full_model.sensitive_coefficient().ok_or(Error::NotFullModel)?;
    Ok(full_model.without_sensitive(full_model.intercept() + policy.constant(beta, stats)))
}
