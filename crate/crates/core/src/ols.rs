//! Ordinary least squares.
//!
//! Fits are solved with a Householder QR factorization of the design matrix
//! after scaling every column to unit Euclidean norm. The condition estimate
//! is the ratio of extreme singular values of the scaled triangular factor, so
//! it does not change when a feature is rescaled.

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Fits whose scaled design has a larger condition estimate are rejected.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrainedOn {
    pub n: usize,
    pub k: usize,
    pub includes_sensitive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    intercept: f64,
    coefficients: Vec<f64>,
    sensitive_coefficient: Option<f64>,
    feature_names: Vec<String>,
    n: usize,
    condition_estimate: f64,
}

impl LinearModel {
    /// A hand-specified model. Features are named `x1..xk`.
    pub fn new(intercept: f64, coefficients: Vec<f64>, sensitive_coefficient: Option<f64>) -> Self {
        let feature_names = (1..=coefficients.len()).map(|j| format!("x{j}")).collect();
        LinearModel {
            intercept,
            coefficients,
            sensitive_coefficient,
            feature_names,
            n: 0,
            condition_estimate: 1.0,
        }
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `β`; `None` for models fit without the sensitive attribute and for
    /// sanitized models.
    pub fn sensitive_coefficient(&self) -> Option<f64> {
        self.sensitive_coefficient
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn trained_on(&self) -> TrainedOn {
        TrainedOn {
            n: self.n,
            k: self.coefficients.len(),
            includes_sensitive: self.sensitive_coefficient.is_some(),
        }
    }

    pub fn includes_sensitive(&self) -> bool {
        self.sensitive_coefficient.is_some()
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Same feature part, new intercept, sensitive term removed.
    pub(crate) fn without_sensitive(&self, intercept: f64) -> Self {
        LinearModel {
            intercept,
            sensitive_coefficient: None,
            ..self.clone()
        }
    }

    pub(crate) fn from_solution(
        solution: &[f64],
        k: usize,
        includes_sensitive: bool,
        feature_names: Vec<String>,
        n: usize,
        condition_estimate: f64,
    ) -> Self {
        LinearModel {
            intercept: solution[0],
            coefficients: solution[1..=k].to_vec(),
            sensitive_coefficient: includes_sensitive.then(|| solution[k + 1]),
            feature_names,
            n,
            condition_estimate,
        }
    }
}

impl Serialize for LinearModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LinearModel", 4)?;
        st.serialize_field("intercept", &self.intercept)?;
        st.serialize_field("coefficients", &self.coefficients)?;
        st.serialize_field("sensitive_coefficient", &self.sensitive_coefficient)?;
        st.serialize_field("feature_names", &self.feature_names)?;
        st.end()
    }
}

/// Design matrix `[1, x_1 .. x_k, (s)]`.
pub(crate) fn design_matrix(d: &Dataset, include_sensitive: bool) -> DMatrix<f64> {
    let p = 1 + d.k() + usize::from(include_sensitive);
    let mut x = DMatrix::from_element(d.n(), p, 1.0);
    for (j, col) in d.features().iter().enumerate() {
        x.column_mut(j + 1).copy_from_slice(col);
    }
    if include_sensitive {
        x.column_mut(p - 1).copy_from_slice(d.sensitive());
    }
    x
}

/// Scales columns to unit norm, returning the scaled matrix and the norms.
fn equilibrate(x: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    if norms.contains(&0.0) {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
        });
    }
    let mut scaled = x.clone();
    for (mut col, &norm) in scaled.column_iter_mut().zip(&norms) {
        col /= norm;
    }
    Ok((scaled, norms))
}

/// Condition estimate of `x` after column equilibration.
pub(crate) fn condition_estimate(x: &DMatrix<f64>) -> Result<f64> {
    let (n, p) = x.shape();
    if n < p {
        return Err(Error::Underdetermined { rows: n, params: p });
    }
    let (scaled, _) = equilibrate(x)?;
    let r = scaled.qr().r();
    let sv = r.singular_values();
    let max = sv.max();
    let min = sv.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::RankDeficient { condition });
    }
    Ok(condition)
}

/// Minimizes `‖y − x·b‖²` by QR. The caller checks conditioning.
pub(crate) fn qr_solve(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let p = x.ncols();
    let (scaled, norms) = equilibrate(x)?;
    let qr = scaled.qr();
    let mut rhs = y.clone();
    qr.q_tr_mul(&mut rhs);
    let r = qr.r();
    let z = r
        .solve_upper_triangular(&rhs.rows(0, p).into_owned())
        .ok_or(Error::RankDeficient {
            condition: f64::INFINITY,
        })?;
    Ok(DVector::from_iterator(p, z.iter().zip(&norms).map(|(v, n)| v / n)))
}

/// Fits `y = b₀ + Σ b_j·x_j (+ β·s)` by ordinary least squares.
pub fn fit(d: &Dataset, include_sensitive: bool) -> Result<LinearModel> {
    let x = design_matrix(d, include_sensitive);
    let condition = condition_estimate(&x)?;
    let y = DVector::from_column_slice(d.target());
    let b = qr_solve(&x, &y)?;
    Ok(LinearModel::from_solution(
        b.as_slice(),
        d.k(),
        include_sensitive,
        d.feature_names().to_vec(),
        d.n(),
        condition,
    ))
}

pub fn predict(m: &LinearModel, features: &[f64], sensitive: Option<f64>) -> Result<f64> {
    if features.len() != m.coefficients.len() {
        return Err(Error::ArityMismatch {
            expected: m.coefficients.len(),
            got: features.len(),
        });
    }
    let linear: f64 = m.intercept + m.coefficients.iter().zip(features).map(|(b, x)| b * x).sum::<f64>();
    match (m.sensitive_coefficient, sensitive) {
        (Some(beta), Some(s)) => Ok(linear + beta * s),
        (None, None) => Ok(linear),
        (Some(_), None) => Err(Error::SensitiveRequired),
        (None, Some(_)) => Err(Error::SensitiveForbidden),
    }
}

/// Predictions for every row of `d`, using its sensitive column only when the
/// model has a sensitive term.
pub fn predict_dataset(m: &LinearModel, d: &Dataset) -> Result<Vec<f64>> {
    if d.k() != m.coefficients.len() {
        return Err(Error::ArityMismatch {
            expected: m.coefficients.len(),
            got: d.k(),
        });
    }
    (0..d.n())
        .map(|i| {
            let s = m.includes_sensitive().then(|| d.sensitive()[i]);
            predict(m, &d.row(i), s)
        })
        .collect()
}

/// `y_i − ŷ_i` in row order.
pub fn residuals(m: &LinearModel, d: &Dataset) -> Result<Vec<f64>> {
    let preds = predict_dataset(m, d)?;
    Ok(d.target().iter().zip(preds).map(|(y, p)| y - p).collect())
}
