//! Group-penalized least squares and the accuracy/fairness tradeoff.
//!
//! The penalized fit minimizes
//!
//! ```text
//! (1/n)·Σ r_i² + λ·(r̄₀ − r̄₁)²
//! ```
//!
//! where `r̄_g` is the mean signed residual of group `g`. The sensitive
//! attribute is never a predictor; it only defines the groups. Both terms are
//! quadratic in the coefficients, so the minimizer is the least-squares
//! solution of the design stacked with one extra row: the scaled rows
//! `x_i/√n` and the contrast row `√λ·aᵀX`, with `a_i = 1/n₀` in group 0 and
//! `−1/n₁` in group 1. This penalty is one reading of "avoid large
//! one-directional errors within a group"; it does not bound within-group
//! error variance.

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::{group_error_profile, GroupAssignment};
use crate::ols::{self, LinearModel};
use crate::stats::sum;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(format!(
            "{lambda} is not a finite non-negative number"
        )))
    }
}

fn check_groups(d: &Dataset, groups: &GroupAssignment) -> Result<()> {
    if groups.len() != d.n() {
        return Err(Error::ArityMismatch {
            expected: d.n(),
            got: groups.len(),
        });
    }
    for g in [0, 1] {
        if groups.count(g) == 0 {
            return Err(Error::EmptyGroup(g));
        }
    }
    Ok(())
}

/// Group contrast `a` with `aᵀr = r̄₀ − r̄₁`.
fn contrast(groups: &GroupAssignment) -> DVector<f64> {
    let n0 = groups.count(0) as f64;
    let n1 = groups.count(1) as f64;
    DVector::from_iterator(
        groups.len(),
        groups
            .labels()
            .iter()
            .map(|&g| if g == 0 { 1.0 / n0 } else { -1.0 / n1 }),
    )
}

pub fn penalized_fit(d: &Dataset, groups: &GroupAssignment, lambda: f64) -> Result<LinearModel> {
    check_lambda(lambda)?;
    check_groups(d, groups)?;
    let x = ols::design_matrix(d, false);
    let condition = ols::condition_estimate(&x)?;
    let y = DVector::from_column_slice(d.target());

    let b = if lambda == 0.0 {
        ols::qr_solve(&x, &y)?
    } else {
        let (n, p) = x.shape();
        let a = contrast(groups);
        let row_scale = 1.0 / (n as f64).sqrt();
        let penalty_scale = lambda.sqrt();
        let contrast_row: RowDVector<f64> = a.transpose() * &x;

        let mut aug_x = DMatrix::zeros(n + 1, p);
        aug_x.rows_mut(0, n).copy_from(&(&x * row_scale));
        aug_x.row_mut(n).copy_from(&(contrast_row * penalty_scale));
        let mut aug_y = DVector::zeros(n + 1);
        aug_y.rows_mut(0, n).copy_from(&(&y * row_scale));
        aug_y[n] = penalty_scale * a.dot(&y);
        ols::qr_solve(&aug_x, &aug_y)?
    };

    Ok(LinearModel::from_solution(
        b.as_slice(),
        d.k(),
        false,
        d.feature_names().to_vec(),
        d.n(),
        condition,
    ))
}

/// `(1/n)·Σ r_i² + λ·(r̄₀ − r̄₁)²` for a model without a sensitive term.
pub fn penalized_objective(d: &Dataset, groups: &GroupAssignment, lambda: f64, model: &LinearModel) -> Result<f64> {
    check_groups(d, groups)?;
    let r = ols::residuals(model, d)?;
    let gap = group_error_profile(&r, groups)?.gap();
    Ok(sum(r.iter().map(|v| v * v)) / d.n() as f64 + lambda * gap * gap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub lambda: f64,
    /// Training mean squared error.
    pub mse: f64,
    /// Group 0 minus group 1 mean signed residual.
    pub group_gap: f64,
    pub model: LinearModel,
}

/// One penalized fit per lambda. `lambdas` must be non-empty and strictly
/// ascending.
pub fn tradeoff_sweep(d: &Dataset, groups: &GroupAssignment, lambdas: &[f64]) -> Result<Vec<TradeoffPoint>> {
    if lambdas.is_empty() {
        return Err(Error::InvalidLambda("at least one lambda is required".into()));
    }
    for &l in lambdas {
        check_lambda(l)?;
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLambda("lambdas must ascend".into()));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            let model = penalized_fit(d, groups, lambda)?;
            let r = ols::residuals(&model, d)?;
            let profile = group_error_profile(&r, groups)?;
            Ok(TradeoffPoint {
                lambda,
                mse: sum(r.iter().map(|v| v * v)) / d.n() as f64,
                group_gap: profile.gap(),
                model,
            })
        })
        .collect()
}

/// `lambda,mse,group_gap,intercept,<feature coefficients>` with one row per
/// point.
pub fn sweep_csv(points: &[TradeoffPoint]) -> String {
    let mut out = String::from("lambda,mse,group_gap,intercept");
    if let Some(first) = points.first() {
        for name in first.model.feature_names() {
            out.push(',');
            out.push_str(name);
        }
    }
    out.push('\n');
    for p in points {
        let mut fields = vec![p.lambda, p.mse, p.group_gap, p.model.intercept()];
        fields.extend_from_slice(p.model.coefficients());
        let line: Vec<String> = fields.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
