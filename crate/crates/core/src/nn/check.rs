//! Randomized agreement check of the composition calculus against direct
//! evaluation.

use rand::Rng as _;
use serde::Serialize;

use super::calculus::{concatenate, parallelize};
use super::grid::from_pair;
use super::network::{Layer, Matrix, Network};
use crate::{par, rng, Result};

/// Random net with the given widths; each entry is nonzero with probability
/// ½ and drawn from `𝒲_c`.
pub fn random_network(r: &mut rng::Rng, dims: &[usize], c: u32) -> Network {
    let scale = 1i64 << c;
    let entry = |r: &mut rng::Rng| {
        if r.random_bool(0.5) {
            from_pair(r.random_range(-scale..=scale), c)
        } else {
            0.0
        }
    };
    let matrix = |r: &mut rng::Rng, rows: usize, cols: usize| {
        let data: Vec<f64> = (0..rows * cols).map(|_| entry(r)).collect();
        Matrix::from_dense(rows, cols, &data)
    };
    let mut layers = Vec::new();
    for w in dims.windows(2).take(dims.len() - 2) {
        let weights = matrix(r, w[1], w[0]);
        let shifts = (0..w[1]).map(|_| entry(r)).collect();
        layers.push(Layer::new(weights, shifts));
    }
    let k = dims.len();
    let output = matrix(r, dims[k - 1], dims[k - 2]);
    Network::new(layers, output).expect("grid entries")
}

fn random_dims(r: &mut rng::Rng, d_in: usize, d_out: usize, max_width: usize, max_depth: usize) -> Vec<usize> {
    let depth = r.random_range(0..=max_depth);
    let mut dims = vec![d_in];
    dims.extend((0..depth).map(|_| r.random_range(1..=max_width)));
    dims.push(d_out);
    dims
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeCheck {
    pub pairs: usize,
    pub probes: usize,
    pub max_concat_error: f64,
    pub max_parallel_error: f64,
    /// Pairs whose composed depth or sparsity broke the stated budget.
    pub budget_violations: usize,
    pub pass: bool,
}

/// For `pairs` random pairs with widths up to `max_dim` and depth up to
/// `max_depth`, compares `concatenate` and `parallelize` against direct
/// evaluation on `probes` uniform points of the unit cube.
pub fn compose_check(pairs: usize, probes: usize, max_dim: usize, max_depth: usize, seed: u64) -> Result<ComposeCheck> {
    let per_pair = par::map_indexed(pairs, |i| -> Result<(f64, f64, bool)> {
        let mut r = rng::stream(seed, i as u32, 0);
        let d = r.random_range(1..=max_dim);
        let mid = r.random_range(1..=max_dim);
        let out = r.random_range(1..=max_dim);
        let c = r.random_range(1..=6);
        let net = |r: &mut rng::Rng, a: usize, b: usize| {
            let dims = random_dims(r, a, b, max_dim, max_depth);
            random_network(r, &dims, c)
        };
        let inner = net(&mut r, d, mid);
        let outer = net(&mut r, mid, out);
        let other = net(&mut r, d, out);

        let cat = concatenate(&outer, &inner)?;
        let par_net = parallelize(&inner, &other)?;
        let deepest = inner.depth().max(other.depth());
        let padding = d * ((deepest - inner.depth()) + (deepest - other.depth()));
        let ok = cat.depth() == outer.depth() + inner.depth() + 1
            && cat.sparsity() <= 2 * (outer.sparsity() + inner.sparsity())
            && par_net.depth() == deepest
            && par_net.sparsity() <= inner.sparsity() + other.sparsity() + padding;

        let (mut e_cat, mut e_par) = (0f64, 0f64);
        for _ in 0..probes {
            let x: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
            let direct = outer.eval(&inner.eval(&x));
            for (a, b) in cat.eval(&x).iter().zip(&direct) {
                e_cat = e_cat.max((a - b).abs());
            }
            let mut both = inner.eval(&x);
            both.extend(other.eval(&x));
            for (a, b) in par_net.eval(&x).iter().zip(&both) {
                e_par = e_par.max((a - b).abs());
            }
        }
        Ok((e_cat, e_par, ok))
    });
    let mut report = ComposeCheck {
        pairs,
        probes,
        max_concat_error: 0.0,
        max_parallel_error: 0.0,
        budget_violations: 0,
        pass: false,
    };
    for p in per_pair {
        let (a, b, ok) = p?;
        report.max_concat_error = report.max_concat_error.max(a);
        report.max_parallel_error = report.max_parallel_error.max(b);
        report.budget_violations += usize::from(!ok);
    }
    report.pass = report.max_concat_error <= 1e-9 && report.max_parallel_error <= 1e-9 && report.budget_violations == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_nets_respect_dims_and_grid() {
        let mut r = rng::stream(3, 0, 0);
        let net = random_network(&mut r, &[3, 4, 2, 1], 3);
        assert_eq!(net.dims(), vec![3, 4, 2, 1]);
        assert!(net.grid().c <= 3);
    }

    #[test]
    fn small_check_passes() {
        let r = compose_check(20, 50, 4, 3, 1).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
