//! Seeded replicated experiments: convergence rates, class growth, the
//! noise and margin audit, and the lower-bound curve.

mod audit;
mod config;
mod lower;
mod rates;

pub use crate::stats::{fit_loglog_slope, mean_stderr, SlopeFit};
pub use audit::{
    class_growth_audit, condition_audit, ApproxRow, ConditionAudit, ConditionAuditConfig, GrowthAudit, GrowthRow,
};
pub use config::{BudgetRule, RateExperimentConfig, TauForm};
pub use lower::{lower_bound_experiment, LowerBoundConfig, LowerBoundReport, LowerBoundRow};
pub use rates::{run_rate_experiment, MetricSummary, RateExperimentResult, RatePoint};
