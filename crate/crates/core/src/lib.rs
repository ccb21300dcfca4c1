//! Fairness-aware linear regression.
//!
//! The crate answers three questions about a linear model and a sensitive
//! attribute `s` (coded `0` for the reference group, `1` for the protected
//! group, or numeric):
//!
//! - How much does leaving `s` out of the regression distort the other
//!   coefficients? See [`bias`].
//! - How can a model fit *with* `s` be turned into one that ignores it? See
//!   [`bias::sanitize`].
//! - How differently does a model treat the two groups, and what does it cost
//!   in accuracy to reduce that? See [`measures`] and [`robust`].
//!
//! [`scenarios`] generates seeded synthetic data with known coefficients and
//! switchable data pathologies.

pub mod bias;
pub mod dataset;
pub mod error;
pub mod measures;
pub mod ols;
pub mod robust;
pub mod scenarios;
mod stats;

pub use bias::{analyze, bias_report, ovb_delta, sanitize, BiasAnalysis, BiasReport, SanitizationPolicy};
pub use dataset::{load_csv, read_csv, summarize, Dataset, FeatureSelection, Roles, SummaryStats};
pub use error::{Error, Result};
pub use measures::{
    fairness_report, group_error_profile, mean_difference, rank_bias_auc, FairnessReport, GroupAssignment,
    GroupErrorProfile, GroupErrors,
};
pub use ols::{fit, predict, predict_dataset, residuals, LinearModel, TrainedOn};
pub use robust::{penalized_fit, penalized_objective, tradeoff_sweep, TradeoffPoint};
pub use scenarios::{generate, table1_fixture, table1_spec, FeatureDistribution, Pathology, ScenarioSpec};
