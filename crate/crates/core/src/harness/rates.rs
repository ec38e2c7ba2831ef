use serde::Serialize;

use super::config::RateExperimentConfig;
use crate::erm::{erm_exact, erm_heuristic, erm_structured, excess_risk, ErmMode, SearchConfig};
use crate::par;
use crate::stats::{fit_loglog_slope, mean_stderr, SlopeFit};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

impl MetricSummary {
    fn of(v: &[f64]) -> Self {
        let (mean, stderr) = mean_stderr(v);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { mean, stderr, min, max }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: u64,
    pub tau: f64,
    /// Natural log of the searched class size (counting bound for
    /// network classes).
    pub log_class_size: f64,
    /// `d_Δ^p` over replications.
    pub d_delta: MetricSummary,
    /// `d_{f_Q}^p` over replications.
    pub d_fq: MetricSummary,
    pub empirical_risk: f64,
    pub erm_mode: ErmMode,
    /// Some quadrature ran below two cells per fragment extent.
    pub coarse: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateExperimentResult {
    pub points: Vec<RatePoint>,
    pub delta_fit: SlopeFit,
    pub fq_fit: SlopeFit,
    /// `−p/(2κ+ρ−1)`.
    pub delta_target: f64,
    /// `−pκ/(2κ+ρ−1)`.
    pub fq_target: f64,
    /// `d_{f_Q}` targets without the margin condition: `−pρ/(ρ+2)` from the
    /// displayed sequence and `−p/(ρ+2)` from the remark after it. Neither
    /// is asserted.
    pub no_margin_targets: [f64; 2],
    /// For `κ = 1`: whether the two fitted slopes agree within their
    /// combined standard error.
    pub kappa_one_agreement: Option<bool>,
}

struct Rep {
    dd: f64,
    df: f64,
    risk: f64,
    coarse: bool,
}

/// Sample, minimize, measure; for every `n` in the grid and every
/// replication. Replication `(i, r)` draws from stream `(seed, i, r)`.
pub fn run_rate_experiment(cfg: &RateExperimentConfig) -> Result<RateExperimentResult> {
    cfg.validate()?;
    let d = cfg.dist.d;
    let reps = cfg.replications;
    let taus: Vec<f64> = cfg.n_grid.iter().map(|&n| cfg.tau.tau(n, cfg.kappa, cfg.rho)).collect();
    let tasks = cfg.n_grid.len() * reps;
    let results = par::map_indexed(tasks, |t| -> Result<Rep> {
        let (i, r) = (t / reps, t % reps);
        let n = cfg.n_grid[i] as usize;
        let mut rng = crate::rng::stream(cfg.seed, i as u32, r as u32);
        let data = cfg.dist.sample_with(n, &mut rng, cfg.seed);
        let report = match cfg.erm_mode {
            ErmMode::ExactStructured => erm_structured(&cfg.rule.grid_class(d, taus[i], cfg.rho)?, &data)?,
            ErmMode::Exact => erm_exact(&cfg.rule.budget(d, taus[i], cfg.rho), &data, cfg.enumeration_limit)?,
            ErmMode::Heuristic => {
                let search = SearchConfig { seed: cfg.seed ^ ((t as u64 + 1) << 20), ..cfg.search };
                erm_heuristic(&cfg.rule.budget(d, taus[i], cfg.rho), &data, &search)?
            }
        };
        let ex = excess_risk(&cfg.dist, &report.hypothesis, &cfg.quad);
        Ok(Rep {
            dd: ex.d_delta.value.max(0.0).powf(cfg.p),
            df: ex.d_fq.value.max(0.0).powf(cfg.p),
            risk: report.risk,
            coarse: ex.d_delta.coarse || ex.d_fq.coarse,
        })
    });
    let results: Vec<Rep> = results.into_iter().collect::<Result<_>>()?;
    let mut points = Vec::new();
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        let block = &results[i * reps..(i + 1) * reps];
        let dd: Vec<f64> = block.iter().map(|r| r.dd).collect();
        let df: Vec<f64> = block.iter().map(|r| r.df).collect();
        let log_class_size = match cfg.erm_mode {
            ErmMode::ExactStructured => cfg.rule.grid_class(d, taus[i], cfg.rho)?.log_size(),
            _ => crate::nn::log_count_bound(&cfg.rule.budget(d, taus[i], cfg.rho)),
        };
        points.push(RatePoint {
            n,
            tau: taus[i],
            log_class_size,
            d_delta: MetricSummary::of(&dd),
            d_fq: MetricSummary::of(&df),
            empirical_risk: block.iter().map(|r| r.risk).sum::<f64>() / reps as f64,
            erm_mode: cfg.erm_mode,
            coarse: block.iter().any(|r| r.coarse),
        });
    }
    let fit = |f: &dyn Fn(&RatePoint) -> f64| {
        fit_loglog_slope(&points.iter().map(|p| (p.n as f64, f(p))).collect::<Vec<_>>())
    };
    let delta_fit = fit(&|p| p.d_delta.mean)?;
    let fq_fit = fit(&|p| p.d_fq.mean)?;
    let kappa_one_agreement = (cfg.kappa == 1.0)
        .then(|| (delta_fit.slope - fq_fit.slope).abs() <= (delta_fit.stderr.powi(2) + fq_fit.stderr.powi(2)).sqrt());
    let rho = cfg.rho;
    Ok(RateExperimentResult {
        points,
        delta_fit,
        fq_fit,
        delta_target: cfg.delta_target(),
        fq_target: cfg.fq_target(),
        no_margin_targets: [-cfg.p * rho / (rho + 2.0), -cfg.p / (rho + 2.0)],
        kappa_one_agreement,
    })
}

impl RateExperimentResult {
    /// Columns `n,metric,mean,stderr,slope_target,erm_mode`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "metric", "mean", "stderr", "slope_target", "erm_mode"])?;
        for p in &self.points {
            for (metric, m, target) in [("d_delta", &p.d_delta, self.delta_target), ("d_fq", &p.d_fq, self.fq_target)] {
                w.write_record([
                    p.n.to_string(),
                    metric.to_string(),
                    m.mean.to_string(),
                    m.stderr.to_string(),
                    target.to_string(),
                    p.erm_mode.label().to_string(),
                ])?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
    }
}
