//! Composition calculus: concatenation, parallelization and the
//! power-of-two scaling nets.

use super::network::{Layer, Matrix, Network};
use crate::{Error, Result};

/// `x ↦ R(outer)(R(inner)(x))` through a ± layer, so the identity holds on
/// all of ℝ^d. Depth is `L_outer + L_inner + 1`, sparsity at most
/// `2 s_outer + 2 s_inner`.
pub fn concatenate(outer: &Network, inner: &Network) -> Result<Network> {
    if outer.input_dim() != inner.output_dim() {
        return Err(Error::DimensionMismatch { expected: outer.input_dim(), got: inner.output_dim() });
    }
    let mut layers: Vec<Layer> = inner.layers().to_vec();
    let wf = inner.output();
    layers.push(Layer::unshifted(Matrix::vstack(wf, &wf.scaled(-1.0))));
    let pm = |w: &Matrix| Matrix::hstack(w, &w.scaled(-1.0));
    let output = match outer.layers().split_first() {
        Some((first, rest)) => {
            layers.push(Layer::new(pm(&first.weights), first.shifts.clone()));
            layers.extend(rest.iter().cloned());
            outer.output().clone()
        }
        None => pm(outer.output()),
    };
    let grid = outer.grid().c.max(inner.grid().c);
    Network::new(layers, output)?.with_grid(grid)
}

/// Stacks the outputs of `nets`, all reading the same input.
///
/// Shallower nets are padded at the input side with identity layers
/// `σ(x) = x`; the padding is exact on the nonnegative orthant, which
/// contains every domain these nets are used on. Depth is the maximum depth,
/// sparsity at most `Σ s_i + d·Σ (L − L_i)`.
pub fn parallelize_all(nets: &[&Network]) -> Result<Network> {
    let first = nets.first().ok_or_else(|| Error::InvalidArgument("no networks to parallelize".into()))?;
    let d = first.input_dim();
    if let Some(bad) = nets.iter().find(|n| n.input_dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: bad.input_dim() });
    }
    let depth = nets.iter().map(|n| n.depth()).max().unwrap_or(0);
    let padded: Vec<Vec<Layer>> = nets
        .iter()
        .map(|n| {
            let mut ls: Vec<Layer> = (n.depth()..depth).map(|_| Layer::unshifted(Matrix::identity(d))).collect();
            ls.extend(n.layers().iter().cloned());
            ls
        })
        .collect();
    let mut layers = Vec::with_capacity(depth);
    for s in 0..depth {
        let mats: Vec<&Matrix> = padded.iter().map(|ls| &ls[s].weights).collect();
        let weights = if s == 0 { vstack_many(&mats) } else { block_diag_many(&mats) };
        let shifts = padded.iter().flat_map(|ls| ls[s].shifts.iter().copied()).collect();
        layers.push(Layer::new(weights, shifts));
    }
    let outs: Vec<&Matrix> = nets.iter().map(|n| n.output()).collect();
    let output = if depth == 0 { vstack_many(&outs) } else { block_diag_many(&outs) };
    let grid = nets.iter().map(|n| n.grid().c).max().unwrap_or(0);
    Network::new(layers, output)?.with_grid(grid)
}

/// Two-net case of [`parallelize_all`].
pub fn parallelize(a: &Network, b: &Network) -> Result<Network> {
    parallelize_all(&[a, b])
}

fn vstack_many(ms: &[&Matrix]) -> Matrix {
    let mut out = ms[0].clone();
    for m in &ms[1..] {
        out = Matrix::vstack(&out, m);
    }
    out
}

fn block_diag_many(ms: &[&Matrix]) -> Matrix {
    let rows: usize = ms.iter().map(|m| m.rows()).sum();
    let cols: usize = ms.iter().map(|m| m.cols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for m in ms {
        for (r, c, v) in m.iter() {
            out.set(r0 + r, c0 + c, v);
        }
        r0 += m.rows();
        c0 += m.cols();
    }
    out
}

/// Adds all output coordinates into one. Exact for block-diagonal outputs,
/// where each column carries a single entry.
pub fn sum_outputs(net: &Network) -> Result<Network> {
    let ones = Matrix::from_dense(1, net.output_dim(), &vec![1.0; net.output_dim()]);
    net.postcompose_linear(&ones)
}

/// `x ↦ W x` as a depth-zero network.
pub fn linear_net(w: Matrix) -> Result<Network> {
    Network::linear(w)
}

/// `L` identity layers on `d` inputs; realizes `x ↦ x` on the nonnegative orthant.
pub fn identity_net(d: usize, depth: usize) -> Network {
    let layers = (0..depth).map(|_| Layer::unshifted(Matrix::identity(d))).collect();
    Network::new(layers, Matrix::identity(d)).expect("identity is on the grid")
}

/// `x ↦ 2^M x` on `[0, ∞)` with `M` doubling layers; depth `M`, sparsity `4M`.
pub fn scale_net(m: u32) -> Network {
    assert!(m >= 1, "scale exponent must be positive");
    let mut layers = vec![Layer::unshifted(Matrix::from_rows(&[vec![1.0], vec![1.0]]))];
    for _ in 1..m {
        layers.push(Layer::unshifted(Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]])));
    }
    Network::new(layers, Matrix::from_rows(&[vec![1.0, 1.0]])).expect("unit weights")
}

/// `(Φ₁, Φ₂)` with `R(Φ₁)(x) = 2^M x` on `[0,1]` and `R(Φ₂)(x) = 2^M`.
/// Depths `M` and `M+1`, sparsities `4M` and `4M+1`. Both are declared on
/// the grid `𝒲_c`.
pub fn power_of_two_nets(m: u32, c: u32) -> Result<(Network, Network)> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let phi1 = scale_net(m);
    // σ(0·x − (−1)) = 1 feeds the doubling chain.
    let mut layers = vec![Layer::new(Matrix::zeros(1, 1), vec![-1.0])];
    layers.extend(phi1.layers().iter().cloned());
    let phi2 = Network::new(layers, phi1.output().clone())?;
    Ok((phi1.with_grid(c)?, phi2.with_grid(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_layer(w: &[Vec<f64>], b: Vec<f64>, out: &[Vec<f64>]) -> Network {
        Network::new(vec![Layer::new(Matrix::from_rows(w), b)], Matrix::from_rows(out)).unwrap()
    }

    #[test]
    fn concatenation_depth_and_values() {
        let f = one_layer(&[vec![1.0, -0.5]], vec![0.25], &[vec![1.0], vec![-1.0]]);
        let g = one_layer(&[vec![0.5, 1.0], vec![-1.0, 0.0]], vec![0.0, -0.5], &[vec![1.0, 1.0]]);
        let h = concatenate(&g, &f).unwrap();
        assert_eq!(h.depth(), 3);
        assert!(h.sparsity() <= 2 * g.sparsity() + 2 * f.sparsity());
        for x in [[0.1, 0.9], [0.8, 0.2], [-1.0, 3.0]] {
            let direct = g.eval(&f.eval(&x));
            assert!((h.eval(&x)[0] - direct[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn concatenation_with_identity_affine() {
        let f = one_layer(&[vec![1.0, 0.5]], vec![0.25], &[vec![-1.0]]);
        let id = Network::linear(Matrix::identity(1)).unwrap();
        let h = concatenate(&id, &f).unwrap();
        for i in 0..100 {
            let x = [i as f64 / 99.0, 1.0 - i as f64 / 99.0];
            assert!((h.eval(&x)[0] - f.eval(&x)[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn parallelization_pads_shallower_net() {
        let a = concatenate(
            &one_layer(&[vec![1.0]], vec![0.0], &[vec![1.0]]),
            &one_layer(&[vec![1.0, 1.0]], vec![0.5], &[vec![1.0]]),
        )
        .unwrap();
        let b = one_layer(&[vec![0.5, -1.0]], vec![-0.25], &[vec![-1.0]]);
        let p = parallelize(&a, &b).unwrap();
        assert_eq!(p.depth(), a.depth().max(b.depth()));
        assert!(p.sparsity() <= a.sparsity() + b.sparsity() + 2 * 2 * p.depth());
        for x in [[0.0, 0.0], [0.3, 0.6], [1.0, 0.25]] {
            assert_eq!(p.eval(&x), vec![a.eval(&x)[0], b.eval(&x)[0]]);
        }
    }

    #[test]
    fn power_of_two() {
        let (p1, p2) = power_of_two_nets(3, 0).unwrap();
        assert_eq!(p1.eval(&[0.5]), vec![4.0]);
        assert_eq!(p1.eval(&[0.0]), vec![0.0]);
        assert_eq!(p2.eval(&[0.7]), vec![8.0]);
        let (q1, q2) = power_of_two_nets(1, 2).unwrap();
        assert!(q1.depth() <= 2 && q1.sparsity() <= 5);
        assert!(q2.depth() <= 2 && q2.sparsity() <= 5);
        assert_eq!(q1.grid().c, 2);
    }

    #[test]
    fn summing_block_outputs() {
        let a = one_layer(&[vec![1.0]], vec![0.0], &[vec![1.0]]);
        let b = one_layer(&[vec![1.0]], vec![-1.0], &[vec![0.5]]);
        let s = sum_outputs(&parallelize(&a, &b).unwrap()).unwrap();
        assert_eq!(s.eval(&[0.5]), vec![0.5 + 0.75]);
    }
}
