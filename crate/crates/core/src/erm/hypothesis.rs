use serde::Serialize;

use crate::dist::{d_delta, d_fq, Dataset, QuadSpec, QuadValue, TsybakovDistribution};
use crate::nn::Network;
use crate::sets::{BoundaryFragmentSet, Interval, Region};
use crate::{Error, Result, TOL};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisSet {
    /// `{x : |R(Φ)(x) − 1| ≤ 1e-9}`.
    Network {
        net: Network,
    },
    Fragments {
        set: BoundaryFragmentSet,
    },
}

/// A candidate set `Ĝ` with a note on where it came from.
#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub set: HypothesisSet,
    pub provenance: String,
}

impl Hypothesis {
    pub fn network(net: Network, provenance: impl Into<String>) -> Self {
        Self { set: HypothesisSet::Network { net }, provenance: provenance.into() }
    }

    pub fn fragments(set: BoundaryFragmentSet, provenance: impl Into<String>) -> Self {
        Self { set: HypothesisSet::Fragments { set }, provenance: provenance.into() }
    }
}

impl Region for Hypothesis {
    fn dim(&self) -> usize {
        match &self.set {
            HypothesisSet::Network { net } => net.input_dim(),
            HypothesisSet::Fragments { set } => set.d,
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        match &self.set {
            HypothesisSet::Network { net } => (net.eval(x)[0] - 1.0).abs() <= TOL,
            HypothesisSet::Fragments { set } => set.contains(x),
        }
    }

    fn line_intervals(&self, axis: usize, x: &[f64]) -> Option<Vec<Interval>> {
        match &self.set {
            HypothesisSet::Network { .. } => None,
            HypothesisSet::Fragments { set } => set.line_intervals(axis, x),
        }
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        match &self.set {
            HypothesisSet::Network { .. } => Vec::new(),
            HypothesisSet::Fragments { set } => set.breakpoints(axis),
        }
    }
}

/// `#{i : Y_i ≠ 1(X_i ∈ G)}`.
pub fn error_count(g: &dyn Region, data: &Dataset) -> usize {
    data.points.iter().zip(&data.labels).filter(|(x, &y)| g.contains(x) != (y == 1)).count()
}

/// `R_n(G) = (1/n) Σ 1(Y_i ≠ 1(X_i ∈ G))`.
pub fn empirical_risk(g: &dyn Region, data: &Dataset) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("empirical risk of an empty dataset".into()));
    }
    Ok(error_count(g, data) as f64 / data.len() as f64)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExcessRisk {
    pub d_fq: QuadValue,
    pub d_delta: QuadValue,
}

/// `(d_{f_Q}(G, G*_Q), d_Δ(G, G*_Q))`.
pub fn excess_risk(dist: &TsybakovDistribution, g: &dyn Region, spec: &QuadSpec) -> ExcessRisk {
    let bayes = dist.bayes_set();
    ExcessRisk { d_fq: d_fq(dist, g, &bayes, spec), d_delta: d_delta(dist, g, &bayes, spec) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Marginal, Model};
    use crate::sets::{BoundaryFn, Complement, EmptySet, FullCube};

    #[test]
    fn risk_extremes_and_recount() {
        let ones = Dataset::new(2, vec![vec![0.1, 0.2]; 5], vec![1; 5], 0).unwrap();
        assert_eq!(empirical_risk(&FullCube { d: 2 }, &ones).unwrap(), 0.0);
        assert_eq!(empirical_risk(&EmptySet { d: 2 }, &ones).unwrap(), 1.0);
        assert!(empirical_risk(&FullCube { d: 2 }, &ones.prefix(0)).is_err());

        let q = TsybakovDistribution::single_boundary(2, BoundaryFn::Constant { value: 0.4 }, 1.0, 0.5).unwrap();
        let ds = q.sample(300, 17);
        let g = crate::sets::BoxSet { lo: vec![0.0, 0.0], hi: vec![0.5, 0.7] };
        let mut wrong = 0;
        for i in 0..ds.len() {
            let (x, y) = (&ds.points[i], ds.labels[i]);
            let inside = x[0] <= 0.5 && x[1] <= 0.7;
            if inside as u8 != y {
                wrong += 1;
            }
        }
        assert_eq!(empirical_risk(&g, &ds).unwrap(), wrong as f64 / 300.0);
    }

    #[test]
    fn excess_risk_extremes() {
        let q = TsybakovDistribution::single_boundary(2, BoundaryFn::Constant { value: 0.5 }, 1.0, 0.5).unwrap();
        let bayes = q.bayes_set();
        let e = excess_risk(&q, &bayes, &QuadSpec::default());
        assert_eq!((e.d_fq.value, e.d_delta.value), (0.0, 0.0));

        let one =
            TsybakovDistribution::new(2, Marginal::Uniform, 0.0, 0.5, 0.5, Model::Constant { value: 1.0 }).unwrap();
        let b = one.bayes_set();
        let comp = Complement { inner: &b };
        let e = excess_risk(&one, &comp, &QuadSpec::default());
        assert!((e.d_fq.value - 1.0).abs() < 1e-12 && (e.d_delta.value - 1.0).abs() < 1e-12);
    }
}
