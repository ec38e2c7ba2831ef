use serde::{Deserialize, Serialize};

use crate::dist::{assouad_quantities, prescribed_k, AssouadReport, LowerConstants, QuadSpec};
use crate::par;
use crate::stats::{fit_loglog_slope, SlopeFit};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConfig {
    pub kappa: f64,
    pub beta2: f64,
    pub d: usize,
    pub n_grid: Vec<u64>,
    #[serde(default)]
    pub constants: LowerConstants,
    #[serde(default)]
    pub quad: QuadSpec,
    /// Resolutions checked for the `I₁, I₂` bounds.
    #[serde(default = "default_ks")]
    pub check_ks: Vec<usize>,
}

fn default_ks() -> Vec<usize> {
    vec![2, 4, 8]
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundRow {
    pub report: AssouadReport,
    /// `½A^{2n}` at twice the quadrature resolution.
    pub le_cam_refined: f64,
    /// `assouad / n^{−1/(2κ−1+ρ)}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub rows: Vec<LowerBoundRow>,
    pub i_checks: Vec<AssouadReport>,
    pub i_bounds_hold: bool,
    /// `½e^{−4c*}`; below `½(1 − c*/n)^{2n}` once `c*/n ≤ ½`.
    pub c_prime: f64,
    /// `½e^{−2c*}`, the `n → ∞` limit of `½(1 − c*/n)^{2n}`.
    pub limit: f64,
    pub affinity_above: bool,
    /// Every `le_cam` agrees with its refinement to `5·10⁻⁴`.
    pub stable: bool,
    pub fit: SlopeFit,
    /// `−1/(2κ−1+ρ)`.
    pub target: f64,
    pub slope_pass: bool,
}

impl LowerBoundReport {
    pub fn pass(&self) -> bool {
        self.i_bounds_hold && self.affinity_above && self.stable && self.slope_pass
    }

    /// Columns `n,K,affinity,le_cam,le_cam_refined,affinity_lower,assouad,ratio`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "K", "affinity", "le_cam", "le_cam_refined", "affinity_lower", "assouad", "ratio"])?;
        for r in &self.rows {
            let a = &r.report;
            w.write_record([
                a.n.to_string(),
                a.k.to_string(),
                a.affinity.single.to_string(),
                a.le_cam.to_string(),
                r.le_cam_refined.to_string(),
                a.affinity_lower.to_string(),
                a.assouad.to_string(),
                r.ratio.to_string(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
    }
}

/// The single-bump pair at the prescribed `K` for each `n`, its Assouad
/// quantities, and the slope of the resulting lower-bound curve.
pub fn lower_bound_experiment(cfg: &LowerBoundConfig) -> Result<LowerBoundReport> {
    let rho = (cfg.d as f64 - 1.0) / cfg.beta2;
    let e = 2.0 * cfg.kappa - 1.0 + rho;
    let rows = par::map_slice(&cfg.n_grid, |&n| -> Result<LowerBoundRow> {
        let k = prescribed_k(n, cfg.kappa, cfg.beta2, cfg.d);
        let report = assouad_quantities(k, n, cfg.kappa, cfg.beta2, cfg.d, &cfg.constants, &cfg.quad)?;
        let fine = assouad_quantities(k, n, cfg.kappa, cfg.beta2, cfg.d, &cfg.constants, &cfg.quad.refined())?;
        let ratio = report.assouad / (n as f64).powf(-1.0 / e);
        Ok(LowerBoundRow { report, le_cam_refined: fine.le_cam, ratio })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let n0 = cfg.n_grid.first().copied().unwrap_or(128);
    let i_checks = cfg
        .check_ks
        .iter()
        .map(|&k| assouad_quantities(k, n0, cfg.kappa, cfg.beta2, cfg.d, &cfg.constants, &cfg.quad))
        .collect::<Result<Vec<_>>>()?;
    let i_bounds_hold = i_checks.iter().all(|r| r.i1 <= r.i_bound && r.i2 <= r.i_bound && (r.i1 - r.i2).abs() < 1e-6);
    let c_star = rows.first().map_or(0.0, |r| r.report.c_star);
    let c_prime = 0.5 * (-4.0 * c_star).exp();
    let affinity_above = rows.iter().all(|r| r.report.le_cam > c_prime && r.report.affinity_lower > c_prime);
    let stable = rows.iter().all(|r| (r.report.le_cam - r.le_cam_refined).abs() < 5e-4);
    let fit = fit_loglog_slope(&rows.iter().map(|r| (r.report.n as f64, r.report.assouad)).collect::<Vec<_>>())?;
    let target = -1.0 / e;
    Ok(LowerBoundReport {
        slope_pass: (fit.slope - target).abs() <= 0.05,
        rows,
        i_checks,
        i_bounds_hold,
        c_prime,
        limit: 0.5 * (-2.0 * c_star).exp(),
        affinity_above,
        stable,
        fit,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_sanity() {
        // (1 − c/n)^{2n} → e^{−2c}
        let c: f64 = 0.1;
        let v = (1.0 - c / 1e7_f64).powf(2e7);
        assert!((v - (-2.0 * c).exp()).abs() < 1e-6);
    }

    #[test]
    fn small_grid_passes() {
        let cfg = LowerBoundConfig {
            kappa: 1.0,
            beta2: 1.0,
            d: 2,
            n_grid: vec![128, 256, 512, 1024],
            constants: LowerConstants::default(),
            quad: QuadSpec::default(),
            check_ks: vec![2, 4],
        };
        let r = lower_bound_experiment(&cfg).unwrap();
        assert!(r.i_bounds_hold && r.affinity_above && r.stable, "{:?}", r.fit);
        assert!(r.to_csv().unwrap().lines().count() == 5);
    }
}
