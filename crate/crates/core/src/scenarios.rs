//! Seeded synthetic data following `y = b₀ + Σ b_j·x_j + β·s + e`.
//!
//! Each [`ScenarioSpec`] describes the generating coefficients, the size of
//! the reference (`s = 0`) and protected (`s = 1`) groups, per-group feature
//! distributions, and which data pathologies are switched on.
//!
//! Randomness comes from ChaCha20 seeded through `SeedableRng::seed_from_u64`.
//! ChaCha20 is a counter-based stream cipher, so for a given seed the stream
//! is the same on every platform. Rows are generated one at a time: first
//! every feature in column order, then the noise term.

use std::collections::{BTreeSet, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution as _, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureDistribution {
    /// Uniform on `[lo, hi)`.
    Uniform {
        lo: f64,
        hi: f64,
    },
    Normal {
        mean: f64,
        std: f64,
    },
    /// Exactly these values, one per group member, in order.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDistributions {
    pub reference: Vec<FeatureDistribution>,
    pub protected: Vec<FeatureDistribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pathology {
    /// The target carries the direct `β·s` effect: the labels themselves are
    /// discriminatory.
    LabelBias,
    /// The sensitive column is kept for analysis but dropped on CSV export.
    OmitSensitiveAtExport,
    /// Group sizes may differ. Without it the generator insists on
    /// `n_reference == n_protected`.
    SampleSkew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOrder {
    #[default]
    ReferenceFirst,
    ProtectedFirst,
}

fn default_sensitive_name() -> String {
    "s".into()
}

fn default_target_name() -> String {
    "y".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub true_intercept: f64,
    pub true_coefficients: Vec<f64>,
    pub true_beta: f64,
    pub noise_std: f64,
    pub n_reference: usize,
    pub n_protected: usize,
    pub feature_distributions: GroupDistributions,
    #[serde(default)]
    pub pathologies: BTreeSet<Pathology>,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to `x1..xk`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_names: Option<Vec<String>>,
    #[serde(default = "default_sensitive_name")]
    pub sensitive_name: String,
    #[serde(default = "default_target_name")]
    pub target_name: String,
    #[serde(default)]
    pub row_order: RowOrder,
    #[serde(default)]
    pub allow_single_group: bool,
}

impl ScenarioSpec {
    /// A balanced scenario with the same distribution for every feature in
    /// both groups and label bias switched on.
    pub fn new(
        true_intercept: f64,
        true_coefficients: Vec<f64>,
        true_beta: f64,
        noise_std: f64,
        n_per_group: usize,
        distribution: FeatureDistribution,
    ) -> Self {
        let k = true_coefficients.len();
        ScenarioSpec {
            true_intercept,
            true_coefficients,
            true_beta,
            noise_std,
            n_reference: n_per_group,
            n_protected: n_per_group,
            feature_distributions: GroupDistributions {
                reference: vec![distribution.clone(); k],
                protected: vec![distribution; k],
            },
            pathologies: BTreeSet::from([Pathology::LabelBias]),
            seed: 0,
            feature_names: None,
            sensitive_name: default_sensitive_name(),
            target_name: default_target_name(),
            row_order: RowOrder::default(),
            allow_single_group: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn has(&self, p: Pathology) -> bool {
        self.pathologies.contains(&p)
    }

    pub fn k(&self) -> usize {
        self.true_coefficients.len()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.feature_names
            .clone()
            .unwrap_or_else(|| (1..=self.k()).map(|j| format!("x{j}")).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        let k = self.k();
        if k == 0 {
            return invalid("at least one feature coefficient is required".into());
        }
        if !self.true_intercept.is_finite()
            || !self.true_beta.is_finite()
            || self.true_coefficients.iter().any(|b| !b.is_finite())
        {
            return invalid("coefficients must be finite".into());
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return invalid(format!(
                "noise_std must be finite and non-negative, got {}",
                self.noise_std
            ));
        }
        if self.n_reference + self.n_protected < 2 {
            return invalid("at least two observations are required".into());
        }
        if (self.n_reference == 0 || self.n_protected == 0) && !self.allow_single_group {
            return invalid("both groups need members unless allow_single_group is set".into());
        }
        if self.n_reference != self.n_protected && !self.has(Pathology::SampleSkew) {
            return invalid(format!(
                "unequal group sizes ({} reference, {} protected) require the sample_skew pathology",
                self.n_reference, self.n_protected
            ));
        }
        for (group, dists, size) in [
            ("reference", &self.feature_distributions.reference, self.n_reference),
            ("protected", &self.feature_distributions.protected, self.n_protected),
        ] {
            if dists.len() != k {
                return invalid(format!(
                    "{group} has {} feature distributions, expected {k}",
                    dists.len()
                ));
            }
            for (j, dist) in dists.iter().enumerate() {
                let ok = match dist {
                    FeatureDistribution::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
                    FeatureDistribution::Normal { mean, std } => mean.is_finite() && std.is_finite() && *std >= 0.0,
                    FeatureDistribution::Fixed(values) => values.len() == size && values.iter().all(|v| v.is_finite()),
                };
                if !ok {
                    return invalid(format!(
                        "{group} distribution for feature {} is invalid: {dist:?}",
                        j + 1
                    ));
                }
            }
        }
        let names = self.feature_names();
        if names.len() != k {
            return invalid(format!("{} feature names for {k} coefficients", names.len()));
        }
        let mut seen = HashSet::new();
        for name in names.iter().chain([&self.sensitive_name, &self.target_name]) {
            if !seen.insert(name.as_str()) {
                return invalid(format!("column name `{name}` is used twice"));
            }
        }
        Ok(())
    }
}

enum Sampler<'a> {
    Uniform(Uniform<f64>),
    Normal(Normal<f64>),
    Fixed(&'a [f64]),
}

impl<'a> Sampler<'a> {
    fn new(dist: &'a FeatureDistribution) -> Self {
        match dist {
            FeatureDistribution::Uniform { lo, hi } => Sampler::Uniform(Uniform::new(*lo, *hi)),
            FeatureDistribution::Normal { mean, std } => {
                Sampler::Normal(Normal::new(*mean, *std).expect("validated standard deviation"))
            }
            FeatureDistribution::Fixed(values) => Sampler::Fixed(values),
        }
    }

    fn sample(&self, rng: &mut ChaCha20Rng, member: usize) -> f64 {
        match self {
            Sampler::Uniform(u) => u.sample(rng),
            Sampler::Normal(n) => n.sample(rng),
            Sampler::Fixed(values) => values[member],
        }
    }
}

/// Generates the dataset described by `spec`. Identical specs give
/// bit-identical datasets.
pub fn generate(spec: &ScenarioSpec) -> Result<Dataset> {
    spec.validate()?;
    let k = spec.k();
    let n = spec.n_reference + spec.n_protected;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_std).expect("validated noise_std");
    let direct_effect = if spec.has(Pathology::LabelBias) {
        spec.true_beta
    } else {
        0.0
    };

    let reference: Vec<Sampler> = spec.feature_distributions.reference.iter().map(Sampler::new).collect();
    let protected: Vec<Sampler> = spec.feature_distributions.protected.iter().map(Sampler::new).collect();
    let blocks = match spec.row_order {
        RowOrder::ReferenceFirst => [(0.0, spec.n_reference, &reference), (1.0, spec.n_protected, &protected)],
        RowOrder::ProtectedFirst => [(1.0, spec.n_protected, &protected), (0.0, spec.n_reference, &reference)],
    };

    let mut columns = vec![Vec::with_capacity(n); k];
    let mut sensitive = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for (s, size, samplers) in blocks {
        for member in 0..size {
            let mut y = spec.true_intercept;
            for ((col, sampler), b) in columns.iter_mut().zip(samplers.iter()).zip(&spec.true_coefficients) {
                let x = sampler.sample(&mut rng, member);
                y += b * x;
                col.push(x);
            }
            y += direct_effect * s;
            if spec.noise_std > 0.0 {
                y += noise.sample(&mut rng);
            }
            sensitive.push(s);
            target.push(y);
        }
    }

    let d = Dataset::from_columns(
        columns,
        sensitive,
        target,
        spec.feature_names(),
        spec.sensitive_name.clone(),
        spec.target_name.clone(),
    )
    .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    Ok(d.with_sensitive_hidden(spec.has(Pathology::OmitSensitiveAtExport)))
}

const TABLE1: [(f64, f64, f64); 10] = [
    (1.0, 1.0, 600.0),
    (2.0, 1.0, 700.0),
    (3.0, 1.0, 800.0),
    (4.0, 1.0, 900.0),
    (10.0, 1.0, 1500.0),
    (1.0, 0.0, 1100.0),
    (6.0, 0.0, 1600.0),
    (7.0, 0.0, 1700.0),
    (9.0, 0.0, 1900.0),
    (10.0, 0.0, 2000.0),
];

/// The ten-row salary toy example: education, ethnicity (0 = native,
/// 1 = immigrant) and salary, generated without noise from
/// `salary = 1000 + 100·education − 500·ethnicity`.
pub fn table1_fixture() -> Dataset {
    Dataset::from_columns(
        vec![TABLE1.iter().map(|r| r.0).collect()],
        TABLE1.iter().map(|r| r.1).collect(),
        TABLE1.iter().map(|r| r.2).collect(),
        vec!["education".into()],
        "ethnicity",
        "salary",
    )
    .expect("fixture is valid")
}

/// A scenario whose output is exactly [`table1_fixture`].
pub fn table1_spec() -> ScenarioSpec {
    let education = |s: f64| TABLE1.iter().filter(|r| r.1 == s).map(|r| r.0).collect();
    ScenarioSpec {
        true_intercept: 1000.0,
        true_coefficients: vec![100.0],
        true_beta: -500.0,
        noise_std: 0.0,
        n_reference: 5,
        n_protected: 5,
        feature_distributions: GroupDistributions {
            reference: vec![FeatureDistribution::Fixed(education(0.0))],
            protected: vec![FeatureDistribution::Fixed(education(1.0))],
        },
        pathologies: BTreeSet::from([Pathology::LabelBias]),
        seed: 0,
        feature_names: Some(vec!["education".into()]),
        sensitive_name: "ethnicity".into(),
        target_name: "salary".into(),
        row_order: RowOrder::ProtectedFirst,
        allow_single_group: false,
    }
}
