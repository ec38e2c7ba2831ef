use serde::{Deserialize, Serialize};

use super::config::{BudgetRule, TauForm};
use crate::dist::{
    d_fq, margin_constant_probe, noise_exponent_probe, slab_probes, MarginProbe, Model, NoiseProbe, QuadSpec,
    TsybakovDistribution,
};
use crate::sets::{approx_dfq_bound, bayes_approx_net, ApproxOptions, Region};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    /// `log₂ n`.
    pub log2_n: f64,
    pub tau: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    pub s0: f64,
    pub c: f64,
    /// Natural log of the counting bound.
    pub log_bound: f64,
    /// `log_bound / n^{ρ/(ρ+2κ−1)}`.
    pub c3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthAudit {
    pub rows: Vec<GrowthRow>,
    /// The same quantities at `n = 2^{250}, 2^{500}, 2^{1000}`.
    pub far: Vec<GrowthRow>,
    pub c3_max: f64,
    /// `c₃(2^{1000}) / c₃(2^{500})`.
    pub far_ratio: f64,
    /// `log₂ far_ratio`: the local `α` in `c₃ ∝ (log n)^α`. Tends to 0 for
    /// a bounded sequence and to 2 under the polynomial budget.
    pub polylog_exponent: f64,
    pub bounded: bool,
}

/// Counting bound of the rule's budget at `n = 2^{log2_n}`, in log space so
/// that astronomically large `n` stay finite.
fn growth_row(rule: &BudgetRule, d: usize, log2_n: f64, kappa: f64, rho: f64, form: TauForm) -> GrowthRow {
    let ln_n = log2_n * std::f64::consts::LN_2;
    let mut ln_tau = ln_n / (2.0 * kappa + rho - 1.0);
    if form == TauForm::Log {
        ln_tau -= 2.0 / rho * ln_n.ln();
    }
    let tau = ln_tau.exp();
    let lt = ln_tau.max(1.0);
    let l0 = (rule.a * lt).ceil().max(1.0);
    let s0 = (rule.b * (rho * ln_tau).exp() * lt).ceil().max(2.0);
    let c = rule.c0 as f64 + (rule.c1 * lt).ceil();
    let depth = s0.min(l0);
    let log_bound = s0 * ((d as f64 * s0 + depth * (s0 + 1.0).powi(2)).ln() + (c + 2.0) * std::f64::consts::LN_2);
    let c3 = log_bound / (rho / (rho + 2.0 * kappa - 1.0) * ln_n).exp();
    GrowthRow { log2_n, tau, l0, s0, c, log_bound, c3 }
}

/// `log |N_n| / n^{ρ/(ρ+2κ−1)}` along the grid for the budgets the rule
/// assigns. `bounded` requires a local polylog exponent below ½.
pub fn class_growth_audit(
    rule: &BudgetRule,
    d: usize,
    n_grid: &[u64],
    kappa: f64,
    rho: f64,
    form: TauForm,
) -> GrowthAudit {
    let rows: Vec<GrowthRow> =
        n_grid.iter().map(|&n| growth_row(rule, d, (n as f64).log2(), kappa, rho, form)).collect();
    let far: Vec<GrowthRow> =
        [250.0, 500.0, 1000.0].iter().map(|&e| growth_row(rule, d, e, kappa, rho, form)).collect();
    let c3_max = rows.iter().chain(&far).map(|r| r.c3).fold(0.0, f64::max);
    let far_ratio = far[2].c3 / far[1].c3;
    let polylog_exponent = far_ratio.log2();
    GrowthAudit { rows, far, c3_max, far_ratio, polylog_exponent, bounded: polylog_exponent < 0.5 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionAuditConfig {
    /// Declared noise exponent.
    pub kappa: f64,
    pub slab_deltas: Vec<f64>,
    /// Required lower bound on `d_fq / d_Δ^κ`.
    pub c1_min: f64,
    pub ts: Vec<f64>,
    pub noise_res: usize,
    pub noise_tol: f64,
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub quad: QuadSpec,
}

impl ConditionAuditConfig {
    pub fn for_kappa(kappa: f64) -> Self {
        let slab_deltas = (2..=8).flat_map(|k| [2f64.powi(-k), -(2f64.powi(-k))]).collect();
        Self {
            kappa,
            slab_deltas,
            c1_min: 0.1,
            ts: (4..=9).map(|k| 2f64.powi(-k)).collect(),
            noise_res: 2048,
            noise_tol: 0.1,
            eps_grid: (3..=7).map(|k| 2f64.powi(-k)).collect(),
            quad: QuadSpec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxRow {
    pub eps: f64,
    pub d_fq: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionAudit {
    pub kappa: f64,
    pub margin: MarginProbe,
    pub margin_pass: bool,
    pub noise: Option<NoiseProbe>,
    pub noise_pass: Option<bool>,
    pub approx: Vec<ApproxRow>,
    pub approx_pass: Option<bool>,
    pub notices: Vec<String>,
    pub pass: bool,
}

/// Margin probe on boundary slabs, band-probability slope, and the measured
/// `d_fq` of the constructed approximation against its bound, in one report.
pub fn condition_audit(dist: &TsybakovDistribution, cfg: &ConditionAuditConfig) -> Result<ConditionAudit> {
    let mut notices = Vec::new();
    let slabs = slab_probes(dist, &cfg.slab_deltas);
    let probes: Vec<&dyn Region> = slabs.iter().map(|s| s as &dyn Region).collect();
    let margin = margin_constant_probe(dist, cfg.kappa, &probes, &cfg.quad);
    let margin_pass = margin.min_ratio.is_infinite() || margin.min_ratio >= cfg.c1_min;
    if probes.is_empty() {
        notices.push("no boundary to build slab probes from; margin check vacuous".into());
    }

    let (noise, noise_pass) = if cfg.kappa <= 1.0 {
        notices.push("noise probe needs κ > 1; skipped".into());
        (None, None)
    } else {
        match noise_exponent_probe(dist, &cfg.ts, cfg.noise_res) {
            Ok(p) => {
                let ok = (p.fit.slope - 1.0 / (cfg.kappa - 1.0)).abs() <= cfg.noise_tol;
                (Some(p), Some(ok))
            }
            Err(Error::Degenerate(m)) => {
                notices.push(format!("noise probe degenerate ({m}); skipped"));
                (None, None)
            }
            Err(e) => return Err(e),
        }
    };

    let mut approx = Vec::new();
    let mut approx_pass = None;
    if let Model::Fragments { set } = &dist.model {
        let bayes = dist.bayes_set();
        let mut ok = true;
        for &eps in &cfg.eps_grid {
            match bayes_approx_net(set, eps, &ApproxOptions::new(dist.kappa())) {
                Ok(built) => {
                    let v = d_fq(dist, &built.certified, &bayes, &cfg.quad).value;
                    let bound = approx_dfq_bound(
                        dist.marginal.bound(),
                        set.fragments.len(),
                        dist.d,
                        dist.beta1,
                        dist.envelope_b(),
                        eps,
                    );
                    ok &= v <= bound;
                    approx.push(ApproxRow { eps, d_fq: v, bound });
                }
                Err(e) => notices.push(format!("approximation at ε = {eps} not built: {e}")),
            }
        }
        if !approx.is_empty() {
            approx_pass = Some(ok);
        }
    } else {
        notices.push("approximation check needs a fragment model; skipped".into());
    }

    let pass = margin_pass && noise_pass.unwrap_or(true) && approx_pass.unwrap_or(true);
    Ok(ConditionAudit { kappa: cfg.kappa, margin, margin_pass, noise, noise_pass, approx, approx_pass, notices, pass })
}
