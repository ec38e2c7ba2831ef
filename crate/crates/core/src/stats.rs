//! Small statistics helpers shared by the probes and the harness.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordinary least squares fit of `log y` on `log x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    /// Residuals in log space, in input order.
    pub residuals: Vec<f64>,
}

/// Fits `log y = a + b log x` on at least four points with positive
/// coordinates.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument(format!("slope fit needs at least 4 points, got {}", points.len())));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidArgument(format!("non-positive point ({x}, {y}) in log-log fit")));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all abscissae are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = lx.iter().zip(&ly).map(|(x, y)| y - intercept - slope * x).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, stderr, residuals })
}

/// Mean and standard error of the mean.
pub fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (7..14).map(|k| ((k as f64).exp2(), (k as f64).exp2().powf(-0.5))).collect();
        let f = fit_loglog_slope(&pts).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
    }

    #[test]
    fn constant_values() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 3.0)).collect();
        assert!(fit_loglog_slope(&pts).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_power_law_within_two_stderr() {
        let mut rng = crate::rng::stream(9, 0, 0);
        let mut hits = 0;
        for _ in 0..200 {
            let pts: Vec<(f64, f64)> = (0..10)
                .map(|k| {
                    let x = (k as f64 + 5.0).exp2();
                    (x, 2.0 * x.powf(-0.7) * (0.1 * (rng.random::<f64>() - 0.5)).exp())
                })
                .collect();
            let f = fit_loglog_slope(&pts).unwrap();
            hits += ((f.slope + 0.7).abs() <= 2.0 * f.stderr) as usize;
        }
        assert!(hits >= 180, "{hits}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_loglog_slope(&[(1.0, 1.0); 3]).is_err());
        assert!(fit_loglog_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }
}
