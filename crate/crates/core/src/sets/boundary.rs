use serde::{Deserialize, Serialize};

use super::approx::{
    BoundaryApproximator, ComposeStage, ComposedApprox, GridInterpApprox, PwLinearApprox, StageComponent,
};
use crate::{Error, Result};

/// Boundary functions `γ : [0,1]^{d−1} → ℝ` with a JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryFn {
    Constant {
        value: f64,
    },
    /// One-dimensional interpolant through `(knots[i], values[i])`; knots
    /// increase from 0 to 1.
    PiecewiseLinear {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
    /// `offset + scale·|y − center|^exponent`, one-dimensional.
    Power {
        offset: f64,
        scale: f64,
        center: f64,
        exponent: f64,
    },
    /// `offset + amplitude·sin(2π·frequency·y)`, one-dimensional.
    Sine {
        offset: f64,
        amplitude: f64,
        frequency: f64,
    },
    /// `offset + Σ coef_i y_i`.
    Affine {
        offset: f64,
        coef: Vec<f64>,
    },
    /// `offset + Σ weights_i g_i(y_i)` with one-dimensional `g_i`.
    Additive {
        offset: f64,
        weights: Vec<f64>,
        parts: Vec<BoundaryFn>,
    },
    /// `base + delta`.
    Shifted {
        base: Box<BoundaryFn>,
        delta: f64,
    },
    /// `Σ_i w_i φ_i` over the bump grid `{1,…,K}^{dim}`; `w` is row-major
    /// over the multi-index with the first coordinate slowest.
    Bumps {
        k1: f64,
        resolution: usize,
        beta2: f64,
        dim: usize,
        w: Vec<bool>,
    },
}

/// `φ(t) = exp(1 − 1/(1 − t²))` on `(−1, 1)`, zero outside; `φ(0) = 1`.
pub fn mollifier(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

impl BoundaryFn {
    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::PiecewiseLinear { knots, values } => interp(knots, values, y[0]),
            Self::Power { offset, scale, center, exponent } => offset + scale * (y[0] - center).abs().powf(*exponent),
            Self::Sine { offset, amplitude, frequency } => {
                offset + amplitude * (std::f64::consts::TAU * frequency * y[0]).sin()
            }
            Self::Affine { offset, coef } => offset + coef.iter().zip(y).map(|(c, v)| c * v).sum::<f64>(),
            Self::Additive { offset, weights, parts } => {
                offset + weights.iter().zip(parts).zip(y).map(|((w, g), v)| w * g.eval(&[*v])).sum::<f64>()
            }
            Self::Shifted { base, delta } => base.eval(y) + delta,
            Self::Bumps { k1, resolution, beta2, dim, w } => {
                let k = *resolution as f64;
                let amp = k1 * k.powf(-beta2);
                // Only the bump whose support contains y can be nonzero.
                let mut idx = 0usize;
                let mut prod = 1.0;
                for &v in y.iter().take(*dim) {
                    // centers (2i−1)/K, i = 1..K, supports [(2i−2)/K, 2i/K]
                    let i = ((v * k / 2.0).floor() as usize + 1).min(*resolution);
                    let c = (2.0 * i as f64 - 1.0) / k;
                    prod *= mollifier(k * (v - c));
                    idx = idx * resolution + (i - 1);
                }
                if prod == 0.0 || !w.get(idx).copied().unwrap_or(false) {
                    0.0
                } else {
                    amp * prod
                }
            }
        }
    }

    /// Coordinates along input axis `axis` where γ has kinks or changes
    /// definition.
    pub fn breakpoints(&self, axis: usize) -> Vec<f64> {
        match self {
            Self::PiecewiseLinear { knots, .. } if axis == 0 => knots.clone(),
            Self::Power { center, .. } if axis == 0 => vec![*center],
            Self::Additive { parts, .. } => parts.get(axis).map_or(Vec::new(), |g| g.breakpoints(0)),
            Self::Shifted { base, .. } => base.breakpoints(axis),
            Self::Bumps { resolution, dim, .. } if axis < *dim => {
                (0..=*resolution).map(|i| (2 * i) as f64 / *resolution as f64).filter(|t| *t <= 1.0).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Input dimension when fixed by the function form.
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            Self::Constant { .. } => None,
            Self::PiecewiseLinear { .. } | Self::Power { .. } | Self::Sine { .. } => Some(1),
            Self::Affine { coef, .. } => Some(coef.len()),
            Self::Additive { parts, .. } => Some(parts.len()),
            Self::Shifted { base, .. } => base.input_dim(),
            Self::Bumps { dim, .. } => Some(*dim),
        }
    }

    /// Hölder exponent (capped at 1) and a constant `B` with
    /// `|γ(y) − γ(y')| ≤ B‖y − y'‖_∞^β`, when known in closed form.
    pub fn holder(&self) -> Option<(f64, f64)> {
        match self {
            Self::Constant { .. } => Some((1.0, 0.0)),
            Self::PiecewiseLinear { knots, values } => {
                let lip = knots
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(t, v)| ((v[1] - v[0]) / (t[1] - t[0])).abs())
                    .fold(0.0, f64::max);
                Some((1.0, lip))
            }
            Self::Power { scale, exponent, .. } => {
                if *exponent >= 1.0 {
                    Some((1.0, scale.abs() * exponent))
                } else {
                    Some((*exponent, scale.abs()))
                }
            }
            Self::Sine { amplitude, frequency, .. } => {
                Some((1.0, amplitude.abs() * std::f64::consts::TAU * frequency.abs()))
            }
            Self::Affine { coef, .. } => Some((1.0, coef.iter().map(|c| c.abs()).sum())),
            Self::Additive { weights, parts, .. } => {
                let mut beta: f64 = 1.0;
                let mut b = 0.0;
                for (w, g) in weights.iter().zip(parts) {
                    let (bg, cg) = g.holder()?;
                    beta = beta.min(bg);
                    b += w.abs() * cg;
                }
                Some((beta, b))
            }
            Self::Shifted { base, .. } => base.holder(),
            Self::Bumps { .. } => None,
        }
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self::Shifted { base: Box::new(self.clone()), delta }
    }

    /// The approximator used by the set construction for this function.
    pub fn approximator(&self, dim: usize) -> Result<Box<dyn BoundaryApproximator>> {
        match self {
            Self::Constant { value } => {
                if dim == 1 {
                    Ok(Box::new(PwLinearApprox::new(vec![0.0, 1.0], vec![*value, *value])?))
                } else {
                    let f = Self::Affine { offset: *value, coef: vec![0.0; dim] };
                    f.approximator(dim)
                }
            }
            Self::PiecewiseLinear { knots, values } => {
                Ok(Box::new(PwLinearApprox::new(knots.clone(), values.clone())?))
            }
            Self::Power { .. } | Self::Sine { .. } | Self::Bumps { .. } if dim == 1 => {
                let (beta, b) = self
                    .holder()
                    .or_else(|| self.numeric_lipschitz().map(|l| (1.0, l)))
                    .ok_or_else(|| Error::InvalidArgument("no Hölder constant available".into()))?;
                Ok(Box::new(GridInterpApprox::new(self.clone(), beta, b)?))
            }
            Self::Affine { offset, coef } => {
                let stage =
                    ComposeStage::new(vec![StageComponent::affine((0..coef.len()).collect(), coef.clone(), *offset)?]);
                Ok(Box::new(ComposedApprox::new(dim, vec![stage])?))
            }
            Self::Additive { offset, weights, parts } => {
                let mut comps = Vec::new();
                for (i, g) in parts.iter().enumerate() {
                    comps.push(StageComponent::approximated(
                        vec![i],
                        g.approximator(1)?,
                        g.holder().map_or((1.0, 1.0), |h| h),
                    ));
                }
                let outer = StageComponent::affine((0..parts.len()).collect(), weights.clone(), *offset)?;
                Ok(Box::new(ComposedApprox::new(dim, vec![ComposeStage::new(comps), ComposeStage::new(vec![outer])])?))
            }
            Self::Shifted { base, delta } => match base.as_ref() {
                Self::PiecewiseLinear { knots, values } => {
                    Ok(Box::new(PwLinearApprox::new(knots.clone(), values.iter().map(|v| v + delta).collect())?))
                }
                Self::Constant { value } => Self::Constant { value: value + delta }.approximator(dim),
                _ if dim == 1 => {
                    let (beta, b) = self
                        .holder()
                        .or_else(|| self.numeric_lipschitz().map(|l| (1.0, l)))
                        .ok_or_else(|| Error::InvalidArgument("no Hölder constant available".into()))?;
                    Ok(Box::new(GridInterpApprox::new(self.clone(), beta, b)?))
                }
                _ => Err(Error::InvalidArgument("shifted multivariate boundary has no approximator".into())),
            },
            _ => Err(Error::InvalidArgument(format!(
                "no approximator for this boundary in dimension {dim}; use an additive or affine form"
            ))),
        }
    }

    /// Finite-difference Lipschitz estimate of a one-dimensional function.
    fn numeric_lipschitz(&self) -> Option<f64> {
        if self.input_dim() != Some(1) {
            return None;
        }
        let n = 1 << 14;
        let mut lip: f64 = 0.0;
        let mut prev = self.eval(&[0.0]);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let v = self.eval(&[t]);
            lip = lip.max((v - prev).abs() * n as f64);
            prev = v;
        }
        Some(lip * 1.05)
    }
}

fn interp(knots: &[f64], values: &[f64], t: f64) -> f64 {
    let i = knots.partition_point(|k| *k <= t).clamp(1, knots.len() - 1);
    let (t0, t1) = (knots[i - 1], knots[i]);
    let (v0, v1) = (values[i - 1], values[i]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_linear_and_power() {
        let tent = BoundaryFn::PiecewiseLinear { knots: vec![0.0, 0.5, 1.0], values: vec![0.0, 0.25, 0.0] };
        assert_eq!(tent.eval(&[0.25]), 0.125);
        assert_eq!(tent.eval(&[1.0]), 0.0);
        let p = BoundaryFn::Power { offset: 0.0, scale: 1.0, center: 0.5, exponent: 1.0 };
        assert_eq!(p.eval(&[0.0]), 0.5);
        assert_eq!(p.holder(), Some((1.0, 1.0)));
    }

    #[test]
    fn bump_values() {
        let k = 4;
        let mut w = vec![false; k];
        w[1] = true;
        let g = BoundaryFn::Bumps { k1: 0.1, resolution: k, beta2: 1.0, dim: 1, w };
        // center of bump i = 2 is 3/K
        assert!((g.eval(&[0.75]) - 0.1 / 4.0).abs() < 1e-15);
        assert_eq!(g.eval(&[0.25]), 0.0);
        assert_eq!(g.eval(&[0.5]), 0.0);
        let zero = BoundaryFn::Bumps { k1: 0.1, resolution: k, beta2: 1.0, dim: 1, w: vec![false; k] };
        assert_eq!(zero.eval(&[0.75]), 0.0);
    }

    #[test]
    fn json_form() {
        let g = BoundaryFn::Shifted { base: Box::new(BoundaryFn::Constant { value: 0.5 }), delta: 0.1 };
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"kind\":\"shifted\""));
        assert_eq!(serde_json::from_str::<BoundaryFn>(&s).unwrap(), g);
    }
}
