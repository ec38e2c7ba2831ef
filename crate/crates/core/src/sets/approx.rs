//! Boundary approximators: networks `Φ` with `‖R(Φ) − γ‖_∞ ≤ ε` on
//! `[0,1]^{d−1}`.

use rand::Rng;

use super::boundary::BoundaryFn;
use super::construct::dyadic_floor;
use crate::nn::{concatenate, parallelize_all, Layer, Matrix, Network};
use crate::{Error, Result};

/// Exponent of the grid that non-dyadic knots, values and slopes are
/// rounded to.
const SNAP_C: u32 = 30;

fn snap(v: f64, c: u32) -> f64 {
    let s = (c as f64).exp2();
    (v * s).round() / s
}

/// A constructed approximation together with its certified sup error and
/// the kink locations of its realization (per input axis).
#[derive(Clone, Debug)]
pub struct ApproxNet {
    pub net: Network,
    pub error_bound: f64,
    pub breakpoints: Vec<Vec<f64>>,
}

pub trait BoundaryApproximator: Send + Sync {
    fn input_dim(&self) -> usize;

    /// The function being approximated.
    fn target(&self, y: &[f64]) -> f64;

    /// A network meeting the contract at accuracy `eps`.
    fn build(&self, eps: f64) -> Result<ApproxNet>;

    /// Hölder exponent (≤ 1) and constant of the target.
    fn holder(&self) -> (f64, f64);

    fn label(&self) -> &'static str;
}

/// `z ↦ 2^m z` on all of ℝ: two doubling chains on `z⁺` and `z⁻`.
/// Depth `m`, sparsity `8m`.
pub fn signed_scale_net(m: u32) -> Network {
    assert!(m >= 1, "scale exponent must be positive");
    let mut layers = vec![Layer::unshifted(Matrix::from_rows(&[vec![1.0], vec![1.0], vec![-1.0], vec![-1.0]]))];
    let block =
        [vec![1.0, 1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0, 1.0]];
    for _ in 1..m {
        layers.push(Layer::unshifted(Matrix::from_rows(&block)));
    }
    Network::new(layers, Matrix::from_rows(&[vec![1.0, 1.0, -1.0, -1.0]])).expect("unit weights")
}

/// One-layer ReLU realization of the interpolant through
/// `(knots[i], values[i])` on `[0,1]`, followed by a signed scaling chain
/// when some coefficient exceeds 1 in magnitude. Knots, values and slopes
/// off the dyadic grid `2^-30` are rounded; the returned error is the sup
/// distance between the realization and the unrounded interpolant.
pub fn pw_linear_boundary_net(knots: &[f64], values: &[f64]) -> Result<(Network, f64)> {
    if knots.len() < 2 || knots.len() != values.len() {
        return Err(Error::InvalidArgument("need at least two knots with one value each".into()));
    }
    if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
        return Err(Error::InvalidArgument("knots must start at 0 and end at 1".into()));
    }
    let t: Vec<f64> = knots.iter().map(|&k| snap(k, SNAP_C)).collect();
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("knots must be strictly increasing".into()));
    }
    let v: Vec<f64> = values.iter().map(|&x| snap(x, SNAP_C)).collect();
    let slopes: Vec<f64> = (0..t.len() - 1).map(|i| snap((v[i + 1] - v[i]) / (t[i + 1] - t[i]), SNAP_C)).collect();

    // (shift, coefficient); the first entry is the constant neuron σ(0 − (−1)) = 1.
    let mut neurons = vec![(-1.0, v[0]), (0.0, slopes[0])];
    for i in 1..slopes.len() {
        neurons.push((t[i], slopes[i] - slopes[i - 1]));
    }
    neurons.retain(|&(b, a)| a != 0.0 || b == -1.0);
    let max = neurons.iter().map(|n| n.1.abs()).fold(0.0, f64::max);
    let q = if max > 1.0 { max.log2().ceil() as u32 } else { 0 };
    let scale = (-(q as f64)).exp2();

    let w: Vec<f64> = neurons.iter().map(|&(b, _)| if b == -1.0 { 0.0 } else { 1.0 }).collect();
    let shifts: Vec<f64> = neurons.iter().map(|n| n.0).collect();
    let out: Vec<f64> = neurons.iter().map(|n| n.1 * scale).collect();
    let base = Network::new(
        vec![Layer::new(Matrix::from_dense(w.len(), 1, &w), shifts)],
        Matrix::from_dense(1, out.len(), &out),
    )?;
    let net = if q > 0 { concatenate(&signed_scale_net(q), &base)? } else { base };

    let mut probe: Vec<f64> = knots.iter().chain(&t).copied().collect();
    probe.sort_by(f64::total_cmp);
    let target = BoundaryFn::PiecewiseLinear { knots: knots.to_vec(), values: values.to_vec() };
    let err = probe.iter().map(|&x| (net.eval(&[x])[0] - target.eval(&[x])).abs()).fold(0.0, f64::max);
    Ok((net, err))
}

/// Exact realizer for piecewise-linear one-dimensional boundaries.
pub struct PwLinearApprox {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl PwLinearApprox {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::InvalidArgument("need at least two knots with one value each".into()));
        }
        Ok(Self { knots, values })
    }
}

impl BoundaryApproximator for PwLinearApprox {
    fn input_dim(&self) -> usize {
        1
    }
    fn target(&self, y: &[f64]) -> f64 {
        BoundaryFn::PiecewiseLinear { knots: self.knots.clone(), values: self.values.clone() }.eval(y)
    }
    fn build(&self, eps: f64) -> Result<ApproxNet> {
        let (net, err) = pw_linear_boundary_net(&self.knots, &self.values)?;
        if err > eps {
            return Err(Error::Validation(format!("rounding error {err} exceeds requested accuracy {eps}")));
        }
        Ok(ApproxNet { net, error_bound: err, breakpoints: vec![self.knots.clone()] })
    }
    fn holder(&self) -> (f64, f64) {
        BoundaryFn::PiecewiseLinear { knots: self.knots.clone(), values: self.values.clone() }
            .holder()
            .expect("closed form")
    }
    fn label(&self) -> &'static str {
        "pw-linear"
    }
}

/// Linear interpolation of a Hölder function on a dyadic grid.
pub struct GridInterpApprox {
    f: BoundaryFn,
    beta: f64,
    b: f64,
}

impl GridInterpApprox {
    pub fn new(f: BoundaryFn, beta: f64, b: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidArgument(format!("grid interpolation needs 0 < β ≤ 1, got {beta}")));
        }
        Ok(Self { f, beta, b })
    }
}

/// Interpolant of `f` (Hölder `β ≤ 1`, constant `b`) on the largest dyadic
/// grid with `b·h^β ≤ ε/2`; node values are rounded to a grid of step at
/// most `ε`, so the total sup error is at most `ε`.
pub fn grid_interp_boundary_net(f: &BoundaryFn, beta: f64, b: f64, eps: f64) -> Result<ApproxNet> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid interpolation needs 0 < β ≤ 1, got {beta}")));
    }
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("accuracy must be positive".into()));
    }
    let h = if b <= 0.0 { 1.0 } else { dyadic_floor((eps / (2.0 * b)).powf(1.0 / beta).min(1.0))? };
    let n = (1.0 / h).round() as usize;
    if n > 1 << 20 {
        return Err(Error::InvalidArgument(format!("interpolation grid with {n} cells is too fine")));
    }
    let cv = (1.0 / eps).log2().ceil().max(0.0) as u32;
    let knots: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let values: Vec<f64> = knots.iter().map(|&t| snap(f.eval(&[t]), cv)).collect();
    let (net, _) = pw_linear_boundary_net(&knots, &values)?;
    let error_bound = b * h.powf(beta) + 0.5 * (-(cv as f64)).exp2();
    Ok(ApproxNet { net, error_bound, breakpoints: vec![knots] })
}

impl BoundaryApproximator for GridInterpApprox {
    fn input_dim(&self) -> usize {
        1
    }
    fn target(&self, y: &[f64]) -> f64 {
        self.f.eval(y)
    }
    fn build(&self, eps: f64) -> Result<ApproxNet> {
        grid_interp_boundary_net(&self.f, self.beta, self.b, eps)
    }
    fn holder(&self) -> (f64, f64) {
        (self.beta, self.b)
    }
    fn label(&self) -> &'static str {
        "grid-interp"
    }
}

enum ComponentKind {
    Affine { coef: Vec<f64>, offset: f64 },
    Approx { inner: Box<dyn BoundaryApproximator>, beta: f64, holder: f64 },
}

/// One coordinate function of a stage, reading the listed outputs of the
/// previous stage.
pub struct StageComponent {
    inputs: Vec<usize>,
    kind: ComponentKind,
}

impl StageComponent {
    /// `offset + Σ coef_i z_{inputs_i}`, realized exactly for `z ≥ 0`.
    pub fn affine(inputs: Vec<usize>, coef: Vec<f64>, offset: f64) -> Result<Self> {
        if inputs.len() != coef.len() {
            return Err(Error::DimensionMismatch { expected: inputs.len(), got: coef.len() });
        }
        for &c in coef.iter().chain([offset].iter()) {
            if c.abs() > 1.0 || crate::nn::dyadic_exponent(c).is_none() {
                return Err(Error::OffGrid { value: c, c: crate::nn::MAX_EXPONENT });
            }
        }
        Ok(Self { inputs, kind: ComponentKind::Affine { coef, offset } })
    }

    pub fn approximated(inputs: Vec<usize>, inner: Box<dyn BoundaryApproximator>, holder: (f64, f64)) -> Self {
        Self { inputs, kind: ComponentKind::Approx { inner, beta: holder.0.min(1.0), holder: holder.1 } }
    }

    fn beta(&self) -> f64 {
        match &self.kind {
            ComponentKind::Affine { .. } => 1.0,
            ComponentKind::Approx { beta, .. } => *beta,
        }
    }

    fn holder_const(&self) -> f64 {
        match &self.kind {
            ComponentKind::Affine { coef, .. } => coef.iter().map(|c| c.abs()).sum(),
            ComponentKind::Approx { holder, .. } => *holder,
        }
    }

    fn target(&self, z: &[f64]) -> f64 {
        let y: Vec<f64> = self.inputs.iter().map(|&i| z[i]).collect();
        match &self.kind {
            ComponentKind::Affine { coef, offset } => offset + coef.iter().zip(&y).map(|(c, v)| c * v).sum::<f64>(),
            ComponentKind::Approx { inner, .. } => inner.target(&y),
        }
    }

    fn build(&self, stage_dim: usize, eps: f64) -> Result<Network> {
        let mut select = Matrix::zeros(self.inputs.len(), stage_dim);
        for (r, &i) in self.inputs.iter().enumerate() {
            if i >= stage_dim {
                return Err(Error::DimensionMismatch { expected: stage_dim, got: i + 1 });
            }
            select.set(r, i, 1.0);
        }
        match &self.kind {
            ComponentKind::Affine { coef, offset } => {
                // σ(z_i) = z_i on z ≥ 0, plus the constant neuron.
                let k = self.inputs.len();
                let w = Matrix::vstack(&Matrix::identity(k), &Matrix::zeros(1, k)).mul(&select);
                let mut shifts = vec![0.0; k];
                shifts.push(-1.0);
                let mut out = coef.clone();
                out.push(*offset);
                Network::new(vec![Layer::new(w, shifts)], Matrix::from_dense(1, k + 1, &out))
            }
            ComponentKind::Approx { inner, .. } => inner.build(eps)?.net.precompose_linear(&select),
        }
    }
}

pub struct ComposeStage {
    pub components: Vec<StageComponent>,
}

impl ComposeStage {
    pub fn new(components: Vec<StageComponent>) -> Self {
        Self { components }
    }
}

/// Per-stage accuracies and effective smoothness of a composed approximation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ComposeReport {
    pub eps: f64,
    pub stage_eps: Vec<f64>,
    pub beta_star: Vec<f64>,
    pub rho: f64,
    pub constant: f64,
    pub probe_error: f64,
    pub violations: Vec<String>,
}

/// Approximates `γ = γ_r ∘ ⋯ ∘ γ_1` stage by stage. Stage `i` is built at
/// `ε_i = (ε/(C r))^{1/∏_{k>i} min{β_k,1}}`, `C = ∏_{k≥2} max{1, H_k}`,
/// with `H_k` the largest Hölder constant in stage `k`. Stage outputs must
/// stay in `[0,1]`; the parallel padding relies on nonnegative inputs.
pub fn compose_boundary_net(input_dim: usize, stages: &[ComposeStage], eps: f64) -> Result<(ApproxNet, ComposeReport)> {
    if stages.is_empty() || stages.last().unwrap().components.len() != 1 {
        return Err(Error::InvalidArgument("the last stage must have exactly one component".into()));
    }
    let r = stages.len();
    let beta: Vec<f64> = stages.iter().map(|s| s.components.iter().map(|c| c.beta()).fold(1.0, f64::min)).collect();
    let holder: Vec<f64> =
        stages.iter().map(|s| s.components.iter().map(|c| c.holder_const()).fold(0.0, f64::max)).collect();
    let constant: f64 = holder.iter().skip(1).map(|h| h.max(1.0)).product();
    let tail = |i: usize| beta[i + 1..].iter().map(|b| b.min(1.0)).product::<f64>();
    let stage_eps: Vec<f64> = (0..r).map(|i| (eps / (constant * r as f64)).powf(1.0 / tail(i))).collect();
    let beta_star: Vec<f64> = (0..r).map(|i| beta[i] * tail(i)).collect();
    let rho = stages
        .iter()
        .zip(&beta_star)
        .map(|(s, b)| s.components.iter().map(|c| c.inputs.len()).max().unwrap_or(0) as f64 / b)
        .fold(0.0, f64::max);

    let mut violations = Vec::new();
    let mut rng = crate::rng::stream(0x5eed, 0, 0);
    let mut dim = input_dim;
    let mut net: Option<Network> = None;
    for (k, stage) in stages.iter().enumerate() {
        let mut nets = Vec::new();
        for (ci, comp) in stage.components.iter().enumerate() {
            let cn = comp.build(dim, stage_eps[k])?;
            let probe_err = (0..512)
                .map(|_| {
                    let z: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
                    (cn.eval(&z)[0] - comp.target(&z)).abs()
                })
                .fold(0.0, f64::max);
            if probe_err > stage_eps[k] + crate::TOL {
                violations
                    .push(format!("stage {k} component {ci}: probe error {probe_err:.3e} > {:.3e}", stage_eps[k]));
            }
            nets.push(cn);
        }
        let refs: Vec<&Network> = nets.iter().collect();
        let stage_net = parallelize_all(&refs)?;
        net = Some(match net {
            None => stage_net,
            Some(prev) => concatenate(&stage_net, &prev)?,
        });
        dim = stage.components.len();
    }
    let net = net.expect("at least one stage");
    let target = |y: &[f64]| {
        let mut z = y.to_vec();
        for s in stages {
            z = s.components.iter().map(|c| c.target(&z)).collect();
        }
        z[0]
    };
    let probe_error = (0..2048)
        .map(|_| {
            let y: Vec<f64> = (0..input_dim).map(|_| rng.random::<f64>()).collect();
            (net.eval(&y)[0] - target(&y)).abs()
        })
        .fold(0.0, f64::max);
    if probe_error > eps + crate::TOL {
        violations.push(format!("composed probe error {probe_error:.3e} > {eps:.3e}"));
    }
    let error_bound =
        (0..r).map(|i| holder[i + 1..].iter().map(|h| h.max(1.0)).product::<f64>() * stage_eps[i].powf(tail(i))).sum();
    let report = ComposeReport { eps, stage_eps, beta_star, rho, constant, probe_error, violations };
    Ok((ApproxNet { net, error_bound, breakpoints: vec![Vec::new(); input_dim] }, report))
}

/// [`compose_boundary_net`] behind the approximator contract.
pub struct ComposedApprox {
    input_dim: usize,
    stages: Vec<ComposeStage>,
}

impl ComposedApprox {
    pub fn new(input_dim: usize, stages: Vec<ComposeStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidArgument("no stages".into()));
        }
        Ok(Self { input_dim, stages })
    }

    pub fn report(&self, eps: f64) -> Result<ComposeReport> {
        Ok(compose_boundary_net(self.input_dim, &self.stages, eps)?.1)
    }
}

impl BoundaryApproximator for ComposedApprox {
    fn input_dim(&self) -> usize {
        self.input_dim
    }
    fn target(&self, y: &[f64]) -> f64 {
        let mut z = y.to_vec();
        for s in &self.stages {
            z = s.components.iter().map(|c| c.target(&z)).collect();
        }
        z[0]
    }
    fn build(&self, eps: f64) -> Result<ApproxNet> {
        let (net, report) = compose_boundary_net(self.input_dim, &self.stages, eps)?;
        if !report.violations.is_empty() {
            return Err(Error::Validation(report.violations.join("; ")));
        }
        Ok(net)
    }
    fn holder(&self) -> (f64, f64) {
        let b =
            self.stages.iter().map(|s| s.components.iter().map(|c| c.beta()).fold(1.0, f64::min)).fold(1.0, f64::min);
        let h = self
            .stages
            .iter()
            .map(|s| s.components.iter().map(|c| c.holder_const()).fold(0.0, f64::max).max(1.0))
            .product();
        (b, h)
    }
    fn label(&self) -> &'static str {
        "compose"
    }
}
