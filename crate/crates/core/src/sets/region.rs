//! Membership predicates on `[0,1]^d` with optional exact line structure,
//! which the quadrature routines use to integrate along one axis exactly.

use crate::nn::Network;

/// Closed interval `[lo, hi]` with `lo ≤ hi`.
pub type Interval = (f64, f64);

pub trait Region: Sync {
    fn dim(&self) -> usize;

    fn contains(&self, x: &[f64]) -> bool;

    /// Sorted disjoint intervals of `{t ∈ [0,1] : x with x[axis] = t ∈ self}`.
    /// `None` when the set has no exact line description along `axis`.
    fn line_intervals(&self, _axis: usize, _x: &[f64]) -> Option<Vec<Interval>> {
        None
    }

    /// Values of coordinate `axis` at which the set's structure changes
    /// (box faces, knots). Used to split quadrature cells.
    fn breakpoints(&self, _axis: usize) -> Vec<f64> {
        Vec::new()
    }
}

/// Sort, drop empty pieces, and merge overlapping intervals.
pub fn merge_intervals(mut v: Vec<Interval>) -> Vec<Interval> {
    v.retain(|(a, b)| b > a);
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// `[0,1] \ ⋃ v` for merged `v`.
pub fn complement_intervals(v: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut t = 0.0;
    for &(a, b) in v {
        if a > t {
            out.push((t, a));
        }
        t = t.max(b);
    }
    if t < 1.0 {
        out.push((t, 1.0));
    }
    out
}

/// Symmetric difference of two merged interval lists.
pub fn sym_diff_intervals(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut cuts: Vec<f64> = a.iter().chain(b).flat_map(|&(x, y)| [x, y]).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let inside = |v: &[Interval], t: f64| v.iter().any(|&(x, y)| x <= t && t <= y);
    let pieces = cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .filter(|w| {
            let m = 0.5 * (w[0] + w[1]);
            inside(a, m) != inside(b, m)
        })
        .map(|w| (w[0], w[1]))
        .collect();
    merge_intervals(pieces)
}

pub struct EmptySet {
    pub d: usize,
}

impl Region for EmptySet {
    fn dim(&self) -> usize {
        self.d
    }
    fn contains(&self, _x: &[f64]) -> bool {
        false
    }
    fn line_intervals(&self, _axis: usize, _x: &[f64]) -> Option<Vec<Interval>> {
        Some(Vec::new())
    }
}

pub struct FullCube {
    pub d: usize,
}

impl Region for FullCube {
    fn dim(&self) -> usize {
        self.d
    }
    fn contains(&self, _x: &[f64]) -> bool {
        true
    }
    fn line_intervals(&self, _axis: usize, _x: &[f64]) -> Option<Vec<Interval>> {
        Some(vec![(0.0, 1.0)])
    }
}

/// Axis-aligned box `∏ [lo_i, hi_i]`.
pub struct BoxSet {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region for BoxSet {
    fn dim(&self) -> usize {
        self.lo.len()
    }
    fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }
    fn line_intervals(&self, axis: usize, x: &[f64]) -> Option<Vec<Interval>> {
        let inside = (0..self.dim()).filter(|&i| i != axis).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i]);
        Some(if inside { vec![(self.lo[axis], self.hi[axis])] } else { Vec::new() })
    }
    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        vec![self.lo[axis], self.hi[axis]]
    }
}

/// `R(Φ)^{-1}(1)` tested pointwise.
pub struct NetworkSet<'a> {
    pub net: &'a Network,
}

impl Region for NetworkSet<'_> {
    fn dim(&self) -> usize {
        self.net.input_dim()
    }
    fn contains(&self, x: &[f64]) -> bool {
        (self.net.eval(x)[0] - 1.0).abs() <= crate::TOL
    }
}

/// `[0,1]^d \ inner`.
pub struct Complement<'a> {
    pub inner: &'a dyn Region,
}

impl Region for Complement<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn contains(&self, x: &[f64]) -> bool {
        !self.inner.contains(x)
    }
    fn line_intervals(&self, axis: usize, x: &[f64]) -> Option<Vec<Interval>> {
        self.inner.line_intervals(axis, x).map(|v| complement_intervals(&v))
    }
    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        self.inner.breakpoints(axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_algebra() {
        let a = merge_intervals(vec![(0.5, 0.7), (0.0, 0.2), (0.1, 0.3)]);
        assert_eq!(a, vec![(0.0, 0.3), (0.5, 0.7)]);
        assert_eq!(complement_intervals(&a), vec![(0.3, 0.5), (0.7, 1.0)]);
        let b = vec![(0.2, 0.6)];
        assert_eq!(sym_diff_intervals(&a, &b), vec![(0.0, 0.2), (0.3, 0.5), (0.6, 0.7)]);
        assert!(sym_diff_intervals(&a, &a).is_empty());
    }

    #[test]
    fn box_lines() {
        let b = BoxSet { lo: vec![0.0, 0.25], hi: vec![0.5, 0.75] };
        assert_eq!(b.line_intervals(0, &[0.0, 0.5]), Some(vec![(0.0, 0.5)]));
        assert_eq!(b.line_intervals(0, &[0.0, 0.9]), Some(vec![]));
        assert!(b.contains(&[0.5, 0.25]));
    }
}
