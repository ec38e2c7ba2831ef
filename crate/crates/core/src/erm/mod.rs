//! Empirical risk and its minimizers over network-defined set classes.
//!
//! Three search modes:
//! - `exact`: every member of an enumerable class, in canonical order
//! - `heuristic`: restarted single-slot search with annealing
//! - `exact-structured`: exact minimizer over the cell-threshold class, whose
//!   risk separates across cells

mod exact;
mod heuristic;
mod hypothesis;
mod structured;

use serde::{Deserialize, Serialize};

pub use exact::erm_exact;
pub use heuristic::{erm_heuristic, SearchConfig};
pub use hypothesis::{empirical_risk, error_count, excess_risk, ExcessRisk, Hypothesis, HypothesisSet};
pub use structured::{erm_structured, GridClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErmMode {
    Exact,
    Heuristic,
    ExactStructured,
}

impl ErmMode {
    pub fn label(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Heuristic => "heuristic",
            Self::ExactStructured => "exact-structured",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErmReport {
    pub hypothesis: Hypothesis,
    pub risk: f64,
    /// Misclassified sample points.
    pub errors: usize,
    pub mode: ErmMode,
    pub candidates: u64,
    /// Canonical position of the minimizer, when the class is enumerated.
    pub index: Option<u64>,
    pub seed: u64,
    /// Best risk so far after each search step (heuristic mode).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<f64>,
}
