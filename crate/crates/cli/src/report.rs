use std::collections::BTreeMap;

use fairaudit_core::bias::{self, BiasReport, SanitizationPolicy};
use fairaudit_core::ols::{predict_dataset, residuals};
use fairaudit_core::{fairness_report, Dataset, FairnessReport, GroupAssignment, LinearModel, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub k: usize,
    pub feature_names: Vec<String>,
    pub sensitive_name: String,
    pub target_name: String,
    pub sensitive_is_binary: bool,
    pub feature_means: Vec<f64>,
    pub sensitive_mean: f64,
    pub feature_variances: Vec<f64>,
    pub sensitive_variance: f64,
    pub cov_feature_sensitive: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ModelFairness {
    pub full: FairnessReport,
    pub omitted: FairnessReport,
    pub sanitized: BTreeMap<&'static str, FairnessReport>,
}

#[derive(Debug, Serialize)]
pub struct AuditReport {
    pub tool_version: &'static str,
    pub seed: Option<u64>,
    pub dataset_summary: DatasetSummary,
    pub full_model: LinearModel,
    pub omitted_model: LinearModel,
    pub bias: BiasReport,
    pub policy: SanitizationPolicy,
    pub sanitized_models: BTreeMap<&'static str, LinearModel>,
    /// `None` when the sensitive attribute is not coded 0/1.
    pub fairness: Option<ModelFairness>,
}

fn fairness_of(model: &LinearModel, d: &Dataset, groups: &GroupAssignment) -> Result<FairnessReport> {
    fairness_report(&predict_dataset(model, d)?, &residuals(model, d)?, groups)
}

pub fn build(d: &Dataset, policy: SanitizationPolicy, seed: Option<u64>) -> Result<AuditReport> {
    let analysis = bias::analyze(d)?;
    let stats = &analysis.stats;

    let mut sanitized_models = BTreeMap::new();
    for p in SanitizationPolicy::ALL {
        sanitized_models.insert(p.name(), bias::sanitize(&analysis.full, p, stats)?);
    }

    let fairness = if d.sensitive_is_binary() {
        let groups = GroupAssignment::from_sensitive(d.sensitive())?;
        let mut sanitized = BTreeMap::new();
        for (name, model) in &sanitized_models {
            sanitized.insert(*name, fairness_of(model, d, &groups)?);
        }
        Some(ModelFairness {
            full: fairness_of(&analysis.full, d, &groups)?,
            omitted: fairness_of(&analysis.omitted, d, &groups)?,
            sanitized,
        })
    } else {
        None
    };

    Ok(AuditReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        seed,
        dataset_summary: DatasetSummary {
            n: d.n(),
            k: d.k(),
            feature_names: d.feature_names().to_vec(),
            sensitive_name: d.sensitive_name().to_string(),
            target_name: d.target_name().to_string(),
            sensitive_is_binary: d.sensitive_is_binary(),
            feature_means: stats.feature_means.clone(),
            sensitive_mean: stats.sensitive_mean,
            feature_variances: stats.feature_variances.clone(),
            sensitive_variance: stats.sensitive_variance,
            cov_feature_sensitive: stats.cov_feature_sensitive.clone(),
        },
        full_model: analysis.full,
        omitted_model: analysis.omitted,
        bias: analysis.report,
        policy,
        sanitized_models,
        fairness,
    })
}
