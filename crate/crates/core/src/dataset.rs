//! Datasets, CSV ingestion and population moments.
//!
//! A [`Dataset`] holds `n` observations of `k` legitimate features, one
//! sensitive attribute and one target. Binary sensitive attributes are coded
//! `0 = reference group`, `1 = protected group`; numeric attributes (age, for
//! instance) are kept as-is.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::{mean, sum};

/// Which CSV columns play which role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub target: String,
    pub sensitive: String,
    pub features: FeatureSelection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureSelection {
    /// Every column that is neither the target nor the sensitive attribute,
    /// in header order.
    AllRemaining,
    Named(Vec<String>),
}

impl Roles {
    pub fn new(target: impl Into<String>, sensitive: impl Into<String>) -> Self {
        Roles {
            target: target.into(),
            sensitive: sensitive.into(),
            features: FeatureSelection::AllRemaining,
        }
    }

    pub fn with_features<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.features = FeatureSelection::Named(names.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
    sensitive: Vec<f64>,
    target: Vec<f64>,
    feature_names: Vec<String>,
    sensitive_name: String,
    target_name: String,
    sensitive_hidden: bool,
}

impl Dataset {
    /// Builds a dataset from feature columns (one `Vec` per feature).
    pub fn from_columns(
        columns: Vec<Vec<f64>>,
        sensitive: Vec<f64>,
        target: Vec<f64>,
        feature_names: Vec<String>,
        sensitive_name: impl Into<String>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        let sensitive_name = sensitive_name.into();
        let target_name = target_name.into();
        let n = target.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if columns.is_empty() {
            return Err(Error::InvalidDataset("at least one feature is required".into()));
        }
        if feature_names.len() != columns.len() {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} feature columns",
                feature_names.len(),
                columns.len()
            )));
        }
        if sensitive.len() != n {
            return Err(Error::InvalidDataset(format!(
                "sensitive column has {} rows, target has {n}",
                sensitive.len()
            )));
        }
        for (name, col) in feature_names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "feature `{name}` has {} rows, target has {n}",
                    col.len()
                )));
            }
        }
        if sensitive_name == target_name {
            return Err(Error::DuplicateRole(target_name));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if name == &sensitive_name || name == &target_name || !seen.insert(name.as_str()) {
                return Err(Error::DuplicateRole(name.clone()));
            }
        }

        let named = feature_names
            .iter()
            .zip(&columns)
            .map(|(name, col)| (name.as_str(), col.as_slice()))
            .chain([(sensitive_name.as_str(), sensitive.as_slice())])
            .chain([(target_name.as_str(), target.as_slice())]);
        for (name, col) in named {
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonNumericCell {
                    row: row + 1,
                    column: name.to_string(),
                    value: col[row].to_string(),
                });
            }
        }

        Ok(Dataset {
            columns,
            sensitive,
            target,
            feature_names,
            sensitive_name,
            target_name,
            sensitive_hidden: false,
        })
    }

    /// Builds a dataset from row-major feature vectors.
    pub fn from_rows(
        rows: &[Vec<f64>],
        sensitive: Vec<f64>,
        target: Vec<f64>,
        feature_names: Vec<String>,
        sensitive_name: impl Into<String>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        let k = feature_names.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); k];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidDataset(format!(
                    "row {} has {} features, expected {k}",
                    i + 1,
                    row.len()
                )));
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::from_columns(columns, sensitive, target, feature_names, sensitive_name, target_name)
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn feature(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn sensitive(&self) -> &[f64] {
        &self.sensitive
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn sensitive_name(&self) -> &str {
        &self.sensitive_name
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    /// A hidden sensitive column is still available for analysis but is
    /// dropped by [`Dataset::write_csv`].
    pub fn sensitive_hidden(&self) -> bool {
        self.sensitive_hidden
    }

    pub fn with_sensitive_hidden(mut self, hidden: bool) -> Self {
        self.sensitive_hidden = hidden;
        self
    }

    /// True when every sensitive value is exactly 0 or 1.
    pub fn sensitive_is_binary(&self) -> bool {
        self.sensitive.iter().all(|&s| s == 0.0 || s == 1.0)
    }

    /// Writes the dataset as CSV: features, then sensitive (unless hidden),
    /// then target. Numbers use the shortest representation that round-trips.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        if !self.sensitive_hidden {
            header.push(&self.sensitive_name);
        }
        header.push(&self.target_name);
        writeln!(out, "{}", header.join(","))?;

        let mut line = String::new();
        for i in 0..self.n() {
            line.clear();
            for col in &self.columns {
                push_number(&mut line, col[i]);
                line.push(',');
            }
            if !self.sensitive_hidden {
                push_number(&mut line, self.sensitive[i]);
                line.push(',');
            }
            push_number(&mut line, self.target[i]);
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

fn push_number(line: &mut String, v: f64) {
    use std::fmt::Write as _;
    // `-0` would not survive a textual round trip as the same bit pattern
    // through most tools; emit plain zero.
    let v = if v == 0.0 { 0.0 } else { v };
    write!(line, "{v}").expect("writing to a String cannot fail");
}

/// Loads a dataset from a headered, comma-separated file.
pub fn load_csv(path: impl AsRef<Path>, roles: &Roles) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_csv(file, roles)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv<R: Read>(reader: R, roles: &Roles) -> Result<Dataset> {
    if roles.sensitive == roles.target {
        return Err(Error::DuplicateRole(roles.target.clone()));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    {
        let mut seen = HashSet::new();
        if let Some(dup) = header.iter().find(|h| !seen.insert(h.as_str())) {
            return Err(Error::InvalidDataset(format!("header repeats column `{dup}`")));
        }
    }
    let index_of = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };

    let target_idx = index_of(&roles.target)?;
    let sensitive_idx = index_of(&roles.sensitive)?;
    let feature_idx: Vec<usize> = match &roles.features {
        FeatureSelection::AllRemaining => (0..header.len())
            .filter(|&i| i != target_idx && i != sensitive_idx)
            .collect(),
        FeatureSelection::Named(names) => {
            let mut seen = HashSet::new();
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                if name == &roles.target || name == &roles.sensitive || !seen.insert(name) {
                    return Err(Error::DuplicateRole(name.clone()));
                }
                idx.push(index_of(name)?);
            }
            idx
        }
    };
    if feature_idx.is_empty() {
        return Err(Error::InvalidDataset("no feature columns selected".into()));
    }

    let mut columns = vec![Vec::new(); feature_idx.len()];
    let mut sensitive = Vec::new();
    let mut target = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let row = r + 1;
        let cell = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::NonNumericCell {
                    row,
                    column: header[i].clone(),
                    value: raw.to_string(),
                })
        };
        for (col, &i) in columns.iter_mut().zip(&feature_idx) {
            col.push(cell(i)?);
        }
        sensitive.push(cell(sensitive_idx)?);
        target.push(cell(target_idx)?);
    }
    if target.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let feature_names = feature_idx.iter().map(|&i| header[i].clone()).collect();
    Dataset::from_columns(
        columns,
        sensitive,
        target,
        feature_names,
        roles.sensitive.clone(),
        roles.target.clone(),
    )
}

/// Population moments (divide by `n`) of the features and the sensitive
/// attribute.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n: usize,
    pub feature_means: Vec<f64>,
    pub sensitive_mean: f64,
    pub feature_variances: Vec<f64>,
    pub sensitive_variance: f64,
    pub cov_feature_sensitive: Vec<f64>,
}

pub fn summarize(d: &Dataset) -> SummaryStats {
    let n = d.n() as f64;
    let s = d.sensitive();
    let s_mean = mean(s);
    let s_centered: Vec<f64> = s.iter().map(|v| v - s_mean).collect();
    let sensitive_variance = sum(s_centered.iter().map(|v| v * v)) / n;

    let mut feature_means = Vec::with_capacity(d.k());
    let mut feature_variances = Vec::with_capacity(d.k());
    let mut cov_feature_sensitive = Vec::with_capacity(d.k());
    for col in d.features() {
        let m = mean(col);
        let centered = col.iter().map(|v| v - m);
        feature_variances.push(sum(centered.clone().map(|v| v * v)) / n);
        cov_feature_sensitive.push(sum(centered.zip(&s_centered).map(|(a, b)| a * b)) / n);
        feature_means.push(m);
    }

    SummaryStats {
        n: d.n(),
        feature_means,
        sensitive_mean: s_mean,
        feature_variances,
        sensitive_variance,
        cov_feature_sensitive,
    }
}
