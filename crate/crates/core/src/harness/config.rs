use serde::{Deserialize, Serialize};

use crate::dist::{QuadSpec, TsybakovDistribution};
use crate::erm::{ErmMode, GridClass, SearchConfig};
use crate::nn::{ClassBudget, DEFAULT_ENUMERATION_LIMIT};
use crate::{Error, Result};

/// Which sequence drives the budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauForm {
    /// `n^{1/(2κ+ρ−1)}`.
    Polynomial,
    /// `n^{1/(2κ+ρ−1)} / log^{2/ρ}(n)`.
    Log,
}

impl TauForm {
    pub fn tau(self, n: u64, kappa: f64, rho: f64) -> f64 {
        let nf = n as f64;
        let base = nf.powf(1.0 / (2.0 * kappa + rho - 1.0));
        match self {
            Self::Polynomial => base,
            Self::Log => base / nf.ln().powf(2.0 / rho),
        }
    }
}

/// `L₀ = ⌈a·log τ⌉`, `s₀ = ⌈b·τ^ρ·log τ⌉`, `c = c₀ + ⌈c₁·log τ⌉`, natural
/// logarithms, `log τ` floored at 1. The cell-threshold class uses
/// `⌈b·τ^{ρ/(d−1)}⌉` cells per axis and the same `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRule {
    pub a: f64,
    pub b: f64,
    pub c0: u32,
    pub c1: f64,
}

impl Default for BudgetRule {
    fn default() -> Self {
        Self { a: 1.0, b: 1.0, c0: 2, c1: 2.0 }
    }
}

impl BudgetRule {
    fn log_tau(tau: f64) -> f64 {
        tau.ln().max(1.0)
    }

    pub fn grid_exponent(&self, tau: f64) -> u32 {
        self.c0 + (self.c1 * Self::log_tau(tau)).ceil() as u32
    }

    pub fn budget(&self, d: usize, tau: f64, rho: f64) -> ClassBudget {
        let lt = Self::log_tau(tau);
        ClassBudget::new(
            d,
            ((self.a * lt).ceil() as usize).max(1),
            ((self.b * tau.powf(rho) * lt).ceil() as usize).max(2),
            self.grid_exponent(tau),
        )
    }

    pub fn grid_class(&self, d: usize, tau: f64, rho: f64) -> Result<GridClass> {
        let cells = (self.b * tau.powf(rho / (d as f64 - 1.0))).ceil().max(1.0) as usize;
        GridClass::new(d, cells, self.grid_exponent(tau).min(30))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateExperimentConfig {
    pub dist: TsybakovDistribution,
    pub kappa: f64,
    pub rho: f64,
    pub n_grid: Vec<u64>,
    pub replications: usize,
    /// Loss power `p ≥ 1`.
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default)]
    pub rule: BudgetRule,
    #[serde(default = "polynomial")]
    pub tau: TauForm,
    pub seed: u64,
    #[serde(default)]
    pub quad: QuadSpec,
    #[serde(default = "structured")]
    pub erm_mode: ErmMode,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default = "default_limit")]
    pub enumeration_limit: u64,
}

fn one() -> f64 {
    1.0
}
fn polynomial() -> TauForm {
    TauForm::Polynomial
}
fn structured() -> ErmMode {
    ErmMode::ExactStructured
}
fn default_limit() -> u64 {
    DEFAULT_ENUMERATION_LIMIT
}

impl RateExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        if self.n_grid.len() < 4 || self.n_grid.windows(2).any(|w| w[1] <= w[0]) || self.n_grid[0] == 0 {
            return Err(Error::Validation("n grid must be strictly increasing with at least 4 positive values".into()));
        }
        if self.replications == 0 {
            return Err(Error::Validation("replications must be at least 1".into()));
        }
        if !(self.p >= 1.0) || !(self.kappa >= 1.0) || !(self.rho > 0.0) {
            return Err(Error::Validation("need p ≥ 1, κ ≥ 1, ρ > 0".into()));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// `−p/(2κ+ρ−1)`.
    pub fn delta_target(&self) -> f64 {
        -self.p / (2.0 * self.kappa + self.rho - 1.0)
    }

    /// `−pκ/(2κ+ρ−1)`.
    pub fn fq_target(&self) -> f64 {
        -self.p * self.kappa / (2.0 * self.kappa + self.rho - 1.0)
    }
}
