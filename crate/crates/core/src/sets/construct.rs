//! The explicit network whose preimage of 1 approximates a boundary
//! fragment set.

use serde::{Deserialize, Serialize};

use super::approx::BoundaryApproximator;
use super::fragment::{drop_coord, BoundaryFragmentSet};
use super::region::{merge_intervals, Interval, Region};
use crate::nn::{concatenate, parallelize, parallelize_all, scale_net, sum_outputs, Layer, Matrix, Network};
use crate::{Error, Result};

/// Largest `2^{-c}`, `c ≥ 0`, not exceeding `δ`; 1 for `δ ≥ 1`.
pub fn dyadic_floor(delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("dyadic_floor needs δ > 0, got {delta}")));
    }
    if delta >= 1.0 {
        return Ok(1.0);
    }
    let mut c = (-delta.log2()).floor().max(0.0) as i32;
    while (-(c as f64)).exp2() > delta {
        c += 1;
    }
    while c > 0 && (-((c - 1) as f64)).exp2() <= delta {
        c -= 1;
    }
    if c > 1000 {
        return Err(Error::InvalidArgument(format!("δ = {delta} is below the representable range")));
    }
    Ok((-(c as f64)).exp2())
}

/// Inner snapping of `∏[lo_i, hi_i]` to the grid `{0, h, …, 1−h}`:
/// `ã_i` is the first grid point above `lo_i`, `b̃_i` the last one below
/// `hi_i`. `None` when some axis collapses.
pub fn snap_box(lo: &[f64], hi: &[f64], h: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let a: Vec<f64> = lo.iter().map(|&v| ((v / h).floor() + 1.0) * h).collect();
    let b: Vec<f64> = hi.iter().map(|&v| ((v / h).ceil() - 1.0) * h).collect();
    a.iter().zip(&b).all(|(x, y)| x < y).then_some((a, b))
}

/// `z ↦ σ(z + 1) − σ(z)`: 0 for `z ≤ −1`, `z + 1` on `(−1, 0)`, 1 for `z ≥ 0`.
pub fn heaviside_net() -> Network {
    Network::new(
        vec![Layer::new(Matrix::from_rows(&[vec![1.0], vec![1.0]]), vec![-1.0, 0.0])],
        Matrix::from_rows(&[vec![1.0, -1.0]]),
    )
    .expect("unit weights")
}

/// Trapezoid gate on coordinate `i` of `ℝ^d`: 1 on `[a, b]`, 0 outside
/// `[a − h/2, b + h/2]`, linear in between. The factor `2/h` comes from a
/// doubling chain.
pub fn box_gate_net(a: f64, b: f64, h: f64, i: usize, d: usize) -> Result<Network> {
    let q = h.log2().round();
    if !(h > 0.0 && h <= 1.0) || q.exp2() != h {
        return Err(Error::InvalidArgument(format!("gate width {h} is not a power of two in (0, 1]")));
    }
    if !(a < b) || i >= d {
        return Err(Error::InvalidArgument(format!("bad gate: a = {a}, b = {b}, axis {i} of {d}")));
    }
    let mut w = Matrix::zeros(4, d);
    for r in 0..4 {
        w.set(r, i, 1.0);
    }
    let ramp = Network::new(
        vec![Layer::new(w, vec![a - h / 2.0, a, b, b + h / 2.0])],
        Matrix::from_rows(&[vec![1.0, -1.0, -1.0, 1.0]]),
    )?;
    concatenate(&scale_net((1.0 - q) as u32), &ramp)
}

/// The clipped value `Φ²` as a function of the base value `y`.
pub fn clip_value(y: f64, mid: f64, h: f64) -> f64 {
    mid + (y + h - mid).max(0.0) - (mid - y + h).max(0.0)
}

/// `y ↦ mid + σ(y − mid + h) − σ(mid − y + h)` applied to the scalar output
/// of `base`: `y + h` above `mid + h`, `y − h` below `mid − h`, `2y − mid`
/// in between.
pub fn clip_net(base: &Network, mid: f64, h: f64) -> Result<Network> {
    if base.output_dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: base.output_dim() });
    }
    let clip = Network::new(
        vec![Layer::new(Matrix::from_rows(&[vec![1.0], vec![-1.0], vec![0.0]]), vec![mid - h, -mid - h, -1.0])],
        Matrix::from_rows(&[vec![1.0, -1.0, mid]]),
    )?;
    concatenate(&clip, base)
}

/// `x ↦ (x_1, …, ι x_j − γ̂(x_{−j}), …, x_d)` on `[0,1]^d`, where `approx`
/// realizes `γ̂` on `d − 1` inputs.
pub fn boundary_shift_net(approx: &Network, j: usize, iota: i8) -> Result<Network> {
    let d = approx.input_dim() + 1;
    if j >= d || approx.output_dim() != 1 {
        return Err(Error::DimensionMismatch { expected: d, got: j + 1 });
    }
    let mut select = Matrix::zeros(d - 1, d);
    for (r, c) in (0..d).filter(|&c| c != j).enumerate() {
        select.set(r, c, 1.0);
    }
    let lifted = approx.precompose_linear(&select)?;
    let both = parallelize(&Network::linear(Matrix::identity(d))?, &lifted)?;
    let mut t = Matrix::zeros(d, d + 1);
    for i in 0..d {
        t.set(i, i, if i == j { iota as f64 } else { 1.0 });
    }
    t.set(j, d, -1.0);
    both.postcompose_linear(&t)
}

/// `σ(Σ_i gate_i(x) + bnd(x) − d)`: equals 1 exactly when every gate and
/// the boundary net are 1, and lies in `[0, 1)` otherwise.
pub fn fragment_indicator_net(gates: &[Network], boundary: &Network) -> Result<Network> {
    let d = gates.len();
    if d == 0 {
        return Err(Error::InvalidArgument("at least one gate is needed".into()));
    }
    let mut parts: Vec<&Network> = gates.iter().collect();
    parts.push(boundary);
    let stacked = parallelize_all(&parts)?;
    let k = d + 1;
    // Pass the k nonnegative values through and add d constant neurons σ(0 + 1).
    let first = Matrix::vstack(&Matrix::identity(k), &Matrix::zeros(d, k));
    let mut shifts = vec![0.0; k];
    shifts.extend(std::iter::repeat_n(-1.0, d));
    let mut row = vec![1.0; k];
    row.extend(std::iter::repeat_n(-1.0, d));
    let post = Network::new(
        vec![Layer::new(first, shifts), Layer::unshifted(Matrix::from_dense(1, k + d, &row))],
        Matrix::from_dense(1, 1, &[1.0]),
    )?;
    concatenate(&post, &stacked)
}

/// `|R(Φ)(x) − 1| ≤ 1e-9`.
pub fn membership(net: &Network, x: &[f64]) -> bool {
    (net.eval(x)[0] - 1.0).abs() <= crate::TOL
}

/// `M (2rd + max{B/(m!(β+1)), 1}) ε^κ` with `κ = 1 + β` and `m` the largest
/// integer below `β`. For `β = 0` the maximum is 1.
pub fn approx_dfq_bound(m_density: f64, r: usize, d: usize, beta: f64, b: f64, eps: f64) -> f64 {
    let tail = if beta > 0.0 {
        let m = (beta.ceil() - 1.0).max(0.0) as u32;
        let fact: f64 = (1..=m).map(f64::from).product();
        (b / (fact * (beta + 1.0))).max(1.0)
    } else {
        1.0
    };
    m_density * (2.0 * (r * d) as f64 + tail) * eps.powf(1.0 + beta)
}

/// Budget functions of the boundary approximators:
/// `L₀(ε) = C₁⌈log ε⁻¹⌉`, `s₀(ε) = C₂ ε^{−ρ} log ε⁻¹`,
/// `c₀(ε) = C₃ + C₄⌈log ε⁻¹⌉` (natural logarithm).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxBudget {
    pub c1: f64,
    pub c2: f64,
    pub c3: u32,
    pub c4: u32,
    pub rho: f64,
}

impl Default for ApproxBudget {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0, c3: 1, c4: 1, rho: 1.0 }
    }
}

impl ApproxBudget {
    fn log_inv(eps: f64) -> f64 {
        (1.0 / eps).ln().max(1.0)
    }

    pub fn l0(&self, eps: f64) -> f64 {
        self.c1 * Self::log_inv(eps).ceil()
    }

    pub fn s0(&self, eps: f64) -> f64 {
        self.c2 * eps.powf(-self.rho) * Self::log_inv(eps)
    }

    pub fn c0(&self, eps: f64) -> f64 {
        self.c3 as f64 + self.c4 as f64 * Self::log_inv(eps).ceil()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxOptions {
    /// Noise exponent; the box grid has step `h_{ε^κ}`.
    pub kappa: f64,
    /// Reject `ε ≥ min{ε₁, ε₂/4}` instead of building anyway.
    pub enforce_range: bool,
    pub budget: ApproxBudget,
}

impl ApproxOptions {
    pub fn new(kappa: f64) -> Self {
        Self { kappa, enforce_range: true, budget: ApproxBudget::default() }
    }
}

/// Size of the constructed net against the budget functions at `ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BudgetReport {
    pub eps: f64,
    pub h: f64,
    pub h_clip: f64,
    pub kept: usize,
    pub dropped: usize,
    #[serde(rename = "L")]
    pub depth: usize,
    pub s: usize,
    pub c: u32,
    pub l0: f64,
    pub s0: f64,
    pub c0: f64,
    /// Sup error of the unclipped boundary approximations.
    pub approx_error: f64,
}

impl BudgetReport {
    pub fn ratios(&self) -> (f64, f64, f64) {
        (self.depth as f64 / self.l0, self.s as f64 / self.s0, self.c as f64 / self.c0)
    }
}

/// A snapped fragment together with its clipped boundary net `γ̂`.
#[derive(Clone, Debug)]
pub struct CertifiedFragment {
    pub j: usize,
    pub iota: i8,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub gamma_hat: Network,
    /// Kinks of `γ̂` and crossings with the box range, per input axis of `γ̂`.
    pub breaks: Vec<Vec<f64>>,
}

impl CertifiedFragment {
    pub fn gamma_hat_at(&self, x: &[f64]) -> f64 {
        self.gamma_hat.eval(&drop_coord(x, self.j))[0]
    }

    fn in_box(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.in_box(x) && self.iota as f64 * x[self.j] <= self.gamma_hat_at(x)
    }

    fn line_interval(&self, x: &[f64]) -> Option<Interval> {
        let j = self.j;
        if !(0..x.len()).filter(|&i| i != j).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i]) {
            return None;
        }
        let g = self.gamma_hat_at(x);
        let (a, b) = if self.iota > 0 { (self.lo[j], self.hi[j].min(g)) } else { (self.lo[j].max(-g), self.hi[j]) };
        (b >= a).then_some((a, b))
    }
}

/// The set `{x : R(Φ)(x) = 1}` described analytically: the union over kept
/// fragments of `D̃_ν ∩ {ι x_j ≤ γ̂_ν(x_{−j})}`.
#[derive(Clone, Debug)]
pub struct CertifiedSet {
    pub d: usize,
    pub fragments: Vec<CertifiedFragment>,
}

impl Region for CertifiedSet {
    fn dim(&self) -> usize {
        self.d
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.fragments.iter().any(|f| f.contains(x))
    }

    fn line_intervals(&self, axis: usize, x: &[f64]) -> Option<Vec<Interval>> {
        if self.fragments.iter().any(|f| f.j != axis) {
            return None;
        }
        Some(merge_intervals(self.fragments.iter().filter_map(|f| f.line_interval(x)).collect()))
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::new();
        for f in &self.fragments {
            v.push(f.lo[axis]);
            v.push(f.hi[axis]);
            if axis != f.j {
                let inner = if axis < f.j { axis } else { axis - 1 };
                if let Some(b) = f.breaks.get(inner) {
                    v.extend(b.iter().copied());
                }
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

pub struct BayesApprox {
    pub net: Network,
    pub certified: CertifiedSet,
    pub report: BudgetReport,
}

/// Builds `Φ = Σ_ν Φ_ν` with the boundary approximators attached to the
/// fragments' own boundary functions.
pub fn bayes_approx_net(set: &BoundaryFragmentSet, eps: f64, opts: &ApproxOptions) -> Result<BayesApprox> {
    let approximators = set.fragments.iter().map(|f| f.gamma.approximator(set.d - 1)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&dyn BoundaryApproximator> = approximators.iter().map(|a| a.as_ref()).collect();
    bayes_approx_net_with(set, eps, &refs, opts)
}

/// As [`bayes_approx_net`] with one caller-supplied approximator per fragment.
pub fn bayes_approx_net_with(
    set: &BoundaryFragmentSet,
    eps: f64,
    approximators: &[&dyn BoundaryApproximator],
    opts: &ApproxOptions,
) -> Result<BayesApprox> {
    set.validate()?;
    if approximators.len() != set.fragments.len() {
        return Err(Error::DimensionMismatch { expected: set.fragments.len(), got: approximators.len() });
    }
    let eps0 = set.eps0();
    if !(eps > 0.0) || (opts.enforce_range && eps >= eps0) {
        return Err(Error::EpsilonOutOfRange { eps, eps0 });
    }
    let d = set.d;
    let h = dyadic_floor(eps.powf(opts.kappa))?;
    let h_clip = dyadic_floor(eps / 2.0)?;

    let mut nets = Vec::new();
    let mut certified = Vec::new();
    let mut dropped = 0;
    let mut approx_error: f64 = 0.0;
    for (f, approx) in set.fragments.iter().zip(approximators) {
        let Some((a, b)) = snap_box(&f.lo, &f.hi, h) else {
            dropped += 1;
            continue;
        };
        if b[f.j] - a[f.j] < 2.0 * eps {
            dropped += 1;
            continue;
        }
        let base = approx.build(eps / 4.0)?;
        approx_error = approx_error.max(base.error_bound);
        let mid = f.iota as f64 * (a[f.j] + b[f.j]) / 2.0;
        let gamma_hat = clip_net(&base.net, mid, h_clip)?;

        let shift = boundary_shift_net(&gamma_hat, f.j, f.iota)?;
        // Heaviside of γ̂ − ι x_j, i.e. of minus the shifted coordinate.
        let mut pick = Matrix::zeros(1, d);
        pick.set(0, f.j, -1.0);
        let boundary = concatenate(&heaviside_net(), &shift.postcompose_linear(&pick)?)?;
        let gates = (0..d).map(|i| box_gate_net(a[i], b[i], h, i, d)).collect::<Result<Vec<_>>>()?;
        nets.push(fragment_indicator_net(&gates, &boundary)?);

        let levels: Vec<f64> = if f.iota > 0 { vec![a[f.j], b[f.j]] } else { vec![-b[f.j], -a[f.j]] };
        let breaks = clipped_breaks(&base.net, &base.breakpoints, mid, h_clip, &levels);
        certified.push(CertifiedFragment { j: f.j, iota: f.iota, lo: a, hi: b, gamma_hat, breaks });
    }

    let net = if nets.is_empty() {
        Network::linear(Matrix::zeros(1, d))?
    } else {
        let refs: Vec<&Network> = nets.iter().collect();
        sum_outputs(&parallelize_all(&refs)?)?
    };
    let report = BudgetReport {
        eps,
        h,
        h_clip,
        kept: nets.len(),
        dropped,
        depth: net.depth(),
        s: net.sparsity(),
        c: net.grid().c,
        l0: opts.budget.l0(eps),
        s0: opts.budget.s0(eps),
        c0: opts.budget.c0(eps),
        approx_error,
    };
    log::debug!("approximation net at eps={eps}: L={} s={} c={}", report.depth, report.s, report.c);
    Ok(BayesApprox { net, certified: CertifiedSet { d, fragments: certified }, report })
}

/// For one-dimensional `γ̂¹` with known knots: the knots, the points where
/// `γ̂¹` crosses `mid ± h`, and the points where the clipped value crosses
/// `levels`. Between consecutive returned points the clipped boundary is
/// affine.
fn clipped_breaks(base: &Network, knots: &[Vec<f64>], mid: f64, h: f64, levels: &[f64]) -> Vec<Vec<f64>> {
    if base.input_dim() != 1 || knots.first().is_none_or(|k| k.is_empty()) {
        return vec![Vec::new(); base.input_dim()];
    }
    let f1 = |t: f64| base.eval(&[t])[0];
    let mut pts: Vec<f64> = knots[0].clone();
    pts.push(0.0);
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let refine = |pts: &[f64], g: &dyn Fn(f64) -> f64, lv: &[f64]| {
        let mut out = pts.to_vec();
        for w in pts.windows(2) {
            let (g0, g1) = (g(w[0]), g(w[1]));
            for &l in lv {
                if (g0 - l) * (g1 - l) < 0.0 {
                    out.push(w[0] + (l - g0) / (g1 - g0) * (w[1] - w[0]));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    };
    let pts = refine(&pts, &f1, &[mid - h, mid + h]);
    let clipped = |t: f64| clip_value(f1(t), mid, h);
    vec![refine(&pts, &clipped, levels)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{BoundaryFn, Fragment, NetworkSet};
    use rand::Rng;

    #[test]
    fn dyadic_floor_values() {
        assert_eq!(dyadic_floor(0.3).unwrap(), 0.25);
        assert_eq!(dyadic_floor(0.125).unwrap(), 0.125);
        assert_eq!(dyadic_floor(1e-3).unwrap(), 0.0009765625);
        assert_eq!(dyadic_floor(3.0).unwrap(), 1.0);
        assert!(dyadic_floor(0.0).is_err());
        assert!(dyadic_floor(-1.0).is_err());
    }

    #[test]
    fn snapping_is_inner() {
        let (a, b) = snap_box(&[0.1, 0.0], &[0.9, 1.0], 0.25).unwrap();
        assert_eq!(a, vec![0.25, 0.25]);
        assert_eq!(b, vec![0.75, 0.75]);
        // grid points on the faces are skipped: strictly inside
        let (a, b) = snap_box(&[0.25, 0.0], &[0.75, 0.5], 0.125).unwrap();
        assert_eq!(a, vec![0.375, 0.125]);
        assert_eq!(b, vec![0.625, 0.375]);
        assert!(snap_box(&[0.0, 0.0], &[0.3, 1.0], 0.25).is_none());
    }

    #[test]
    fn heaviside_cases() {
        let h = heaviside_net();
        assert_eq!(h.eval(&[-2.0])[0], 0.0);
        assert_eq!(h.eval(&[-0.5])[0], 0.5);
        assert_eq!(h.eval(&[0.2])[0], 1.0);
    }

    #[test]
    fn gate_cases() {
        let g = box_gate_net(0.25, 0.75, 0.125, 1, 2).unwrap();
        assert_eq!(g.eval(&[0.9, 0.5])[0], 1.0);
        assert_eq!(g.eval(&[0.0, 0.1])[0], 0.0);
        assert_eq!(g.eval(&[0.0, 0.21875])[0], 0.5);
        assert_eq!(g.eval(&[0.0, 0.75])[0], 1.0);
        assert_eq!(g.eval(&[0.0, 0.8125])[0], 0.0);
        assert!(box_gate_net(0.25, 0.75, 0.3, 0, 2).is_err());
    }

    #[test]
    fn clip_cases() {
        let base = Network::linear(Matrix::from_dense(1, 1, &[1.0])).unwrap();
        let (mid, h) = (0.5, 0.0625);
        let c = clip_net(&base, mid, h).unwrap();
        assert_eq!(c.eval(&[mid + 2.0 * h])[0], mid + 3.0 * h);
        assert_eq!(c.eval(&[mid])[0], mid);
        assert_eq!(c.eval(&[mid - 2.0 * h])[0], mid - 3.0 * h);
        let mut rng = crate::rng::stream(11, 0, 0);
        for _ in 0..1000 {
            let y: f64 = rng.random_range(-1.0..2.0);
            let v = c.eval(&[y])[0];
            assert!((v - y).abs() <= h + 1e-12);
            assert_eq!(v, clip_value(y, mid, h));
        }
    }

    #[test]
    fn shift_net_cases() {
        let zero = Network::linear(Matrix::zeros(1, 1)).unwrap();
        let s = boundary_shift_net(&zero, 0, 1).unwrap();
        assert_eq!(s.eval(&[0.3, 0.6]), vec![0.3, 0.6]);
        let half =
            Network::new(vec![Layer::new(Matrix::zeros(1, 1), vec![-1.0])], Matrix::from_dense(1, 1, &[0.5])).unwrap();
        let s = boundary_shift_net(&half, 0, 1).unwrap();
        let out = s.eval(&[0.3, 0.7]);
        assert!((out[0] + 0.2).abs() < 1e-12);
        assert_eq!(out[1], 0.7);
        let s = boundary_shift_net(&half, 1, -1).unwrap();
        let out = s.eval(&[0.3, 0.7]);
        assert_eq!(out[0], 0.3);
        assert!((out[1] + 1.2).abs() < 1e-12);
    }

    fn two_fragment_set() -> BoundaryFragmentSet {
        let tent = BoundaryFn::PiecewiseLinear { knots: vec![0.0, 0.5, 1.0], values: vec![0.25, 0.375, 0.25] };
        BoundaryFragmentSet::new(
            2,
            vec![
                Fragment { j: 0, iota: 1, lo: vec![0.0, 0.0], hi: vec![1.0, 0.5], gamma: tent },
                Fragment {
                    j: 1,
                    iota: -1,
                    lo: vec![0.0, 0.5],
                    hi: vec![1.0, 1.0],
                    gamma: BoundaryFn::Constant { value: -0.75 },
                },
            ],
            2,
            0.5,
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn construction_matches_certified_set() {
        let set = two_fragment_set();
        let eps = 0.0625;
        let ba = bayes_approx_net(&set, eps, &ApproxOptions::new(2.0)).unwrap();
        assert_eq!(ba.report.kept, 2);
        let net_set = NetworkSet { net: &ba.net };
        let mut rng = crate::rng::stream(5, 0, 0);
        let scale = (32f64).exp2();
        let mut inside = 0;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..2).map(|_| (rng.random::<f64>() * scale).floor() / scale).collect();
            let cert = ba.certified.contains(&x);
            inside += cert as usize;
            assert_eq!(net_set.contains(&x), cert, "x = {x:?}");
            let v = ba.net.eval(&x)[0];
            assert!((0.0..=1.0 + 1e-12).contains(&v));
        }
        assert!(inside > 1000);
    }

    #[test]
    fn fragment_nets_are_disjoint() {
        let set = two_fragment_set();
        let eps = 0.0625;
        let opts = ApproxOptions::new(1.0);
        let parts: Vec<Network> = set
            .fragments
            .iter()
            .map(|f| {
                let one = BoundaryFragmentSet::new(2, vec![f.clone()], 2, 0.5, 0.5).unwrap();
                bayes_approx_net(&one, eps, &opts).unwrap().net
            })
            .collect();
        let mut rng = crate::rng::stream(6, 0, 0);
        for _ in 0..10_000 {
            let x = [rng.random::<f64>(), rng.random::<f64>()];
            assert_eq!(parts[0].eval(&x)[0] * parts[1].eval(&x)[0], 0.0);
        }
    }

    #[test]
    fn clip_orders_against_true_boundary() {
        let set =
            BoundaryFragmentSet::single(2, BoundaryFn::Sine { offset: 0.5, amplitude: 0.45, frequency: 1.0 }).unwrap();
        let eps = 0.125;
        let ba = bayes_approx_net(&set, eps, &ApproxOptions::new(1.0)).unwrap();
        let cf = &ba.certified.fragments[0];
        let (a, b) = (cf.lo[0], cf.hi[0]);
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let g = set.fragments[0].gamma.eval(&[t]);
            let gh = cf.gamma_hat.eval(&[t])[0];
            assert!((gh - g).abs() <= eps);
            if g >= b {
                assert!(gh >= g);
            }
            if g <= a {
                assert!(gh <= g);
            }
        }
    }

    #[test]
    fn out_of_range_and_empty() {
        let set = BoundaryFragmentSet::single(2, BoundaryFn::Constant { value: 0.5 }).unwrap();
        assert!(matches!(bayes_approx_net(&set, 0.5, &ApproxOptions::new(1.0)), Err(Error::EpsilonOutOfRange { .. })));
        let mut opts = ApproxOptions::new(1.0);
        opts.enforce_range = false;
        let ba = bayes_approx_net(&set, 0.6, &opts).unwrap();
        assert_eq!(ba.report.kept, 0);
        assert_eq!(ba.net.eval(&[0.1, 0.1])[0], 0.0);
        assert!(!membership(&ba.net, &[0.1, 0.1]));
    }

    #[test]
    fn bound_formula() {
        assert_eq!(approx_dfq_bound(1.0, 1, 2, 0.0, 1.0, 0.125), 5.0 * 0.125);
        // β = 1: m = 0, B/(β+1) = 1 for B = 2
        assert_eq!(approx_dfq_bound(1.0, 1, 2, 1.0, 2.0, 0.5), 5.0 * 0.25);
        assert_eq!(approx_dfq_bound(1.0, 1, 2, 1.0, 4.0, 0.5), 6.0 * 0.25);
    }
}
