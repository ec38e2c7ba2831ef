use serde::{Deserialize, Serialize};

use super::boundary::BoundaryFn;
use super::region::{merge_intervals, Interval, Region};
use crate::{Error, Result};

/// `H = D ∩ {x : ι x_j ≤ γ(x_{−j})}` with `D = ∏ [lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fragment {
    /// Zero-based coordinate index.
    pub j: usize,
    pub iota: i8,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub gamma: BoundaryFn,
}

/// `x` with coordinate `j` removed.
pub fn drop_coord(x: &[f64], j: usize) -> Vec<f64> {
    x.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect()
}

impl Fragment {
    pub fn in_box(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    /// Signed offset `γ(x_{−j}) − ι x_j`; the fragment holds `x` iff it is ≥ 0.
    pub fn offset(&self, x: &[f64]) -> f64 {
        self.gamma.eval(&drop_coord(x, self.j)) - self.iota as f64 * x[self.j]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.in_box(x) && self.offset(x) >= 0.0
    }

    /// Section along the fragment's own axis at fixed `x_{−j}`.
    pub fn line_interval(&self, x: &[f64]) -> Option<Interval> {
        let j = self.j;
        if !(0..x.len()).filter(|&i| i != j).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i]) {
            return None;
        }
        let g = self.gamma.eval(&drop_coord(x, j));
        let (a, b) = if self.iota > 0 { (self.lo[j], self.hi[j].min(g)) } else { (self.lo[j].max(-g), self.hi[j]) };
        (b >= a).then_some((a, b))
    }

    /// Kinks of `γ` lifted to ambient axis `axis ≠ j`.
    pub fn gamma_breakpoints(&self, axis: usize) -> Vec<f64> {
        if axis == self.j {
            return Vec::new();
        }
        let inner = if axis < self.j { axis } else { axis - 1 };
        self.gamma.breakpoints(inner)
    }
}

/// An element of the boundary-fragment class: a union of at most `r`
/// fragments with almost disjoint boxes, each at least `eps2` long along
/// its own axis. `eps1` is the width of the window in which the envelope
/// condition holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFragmentSet {
    pub d: usize,
    pub fragments: Vec<Fragment>,
    pub r: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl BoundaryFragmentSet {
    pub fn new(d: usize, fragments: Vec<Fragment>, r: usize, eps1: f64, eps2: f64) -> Result<Self> {
        let s = Self { d, fragments, r, eps1, eps2 };
        s.validate()?;
        Ok(s)
    }

    /// One fragment on the whole cube along axis 0.
    pub fn single(d: usize, gamma: BoundaryFn) -> Result<Self> {
        let f = Fragment { j: 0, iota: 1, lo: vec![0.0; d], hi: vec![1.0; d], gamma };
        Self::new(d, vec![f], 1, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.d < 2 {
            return bad(format!("dimension must be at least 2, got {}", self.d));
        }
        if self.fragments.len() > self.r {
            return bad(format!("{} fragments exceed r = {}", self.fragments.len(), self.r));
        }
        if !(self.eps1 > 0.0 && self.eps2 > 0.0) {
            return bad("eps1 and eps2 must be positive".into());
        }
        for (k, f) in self.fragments.iter().enumerate() {
            if f.lo.len() != self.d || f.hi.len() != self.d {
                return Err(Error::DimensionMismatch { expected: self.d, got: f.lo.len().min(f.hi.len()) });
            }
            if f.j >= self.d || (f.iota != 1 && f.iota != -1) {
                return bad(format!("fragment {k}: bad axis or sign"));
            }
            if f.lo.iter().zip(&f.hi).any(|(a, b)| !(0.0 <= *a && a < b && *b <= 1.0)) {
                return bad(format!("fragment {k}: box must satisfy 0 ≤ a_i < b_i ≤ 1"));
            }
            if f.hi[f.j] - f.lo[f.j] < self.eps2 {
                return bad(format!("fragment {k}: extent along axis {} below eps2", f.j));
            }
            if let Some(n) = f.gamma.input_dim() {
                if n != self.d - 1 {
                    return Err(Error::DimensionMismatch { expected: self.d - 1, got: n });
                }
            }
        }
        for (a, fa) in self.fragments.iter().enumerate() {
            for (b, fb) in self.fragments.iter().enumerate().skip(a + 1) {
                let overlap = (0..self.d).all(|i| fa.lo[i].max(fb.lo[i]) < fa.hi[i].min(fb.hi[i]));
                if overlap {
                    return bad(format!("fragments {a} and {b} overlap in a set of positive volume"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Self = serde_json::from_str(s)?;
        v.validate()?;
        Ok(v)
    }

    /// `min{ε₁, ε₂/4}`.
    pub fn eps0(&self) -> f64 {
        self.eps1.min(self.eps2 / 4.0)
    }

    /// Index of the first fragment whose box contains `x`.
    pub fn box_of(&self, x: &[f64]) -> Option<usize> {
        self.fragments.iter().position(|f| f.in_box(x))
    }
}

impl Region for BoundaryFragmentSet {
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
        let mut v: Vec<f64> = self
            .fragments
            .iter()
            .flat_map(|f| {
                let mut b = vec![f.lo[axis], f.hi[axis]];
                b.extend(f.gamma_breakpoints(axis));
                b
            })
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(j: usize, iota: i8, lo: Vec<f64>, hi: Vec<f64>, value: f64) -> Fragment {
        Fragment { j, iota, lo, hi, gamma: BoundaryFn::Constant { value } }
    }

    #[test]
    fn membership_and_lines() {
        let s = BoundaryFragmentSet::new(
            2,
            vec![half(0, 1, vec![0.0, 0.0], vec![1.0, 0.5], 0.25), half(0, -1, vec![0.0, 0.5], vec![1.0, 1.0], -0.75)],
            2,
            1.0,
            0.5,
        )
        .unwrap();
        assert!(s.contains(&[0.2, 0.1]));
        assert!(!s.contains(&[0.3, 0.1]));
        assert!(s.contains(&[0.8, 0.9]));
        assert!(!s.contains(&[0.7, 0.9]));
        assert_eq!(s.line_intervals(0, &[0.0, 0.1]), Some(vec![(0.0, 0.25)]));
        assert_eq!(s.line_intervals(0, &[0.0, 0.9]), Some(vec![(0.75, 1.0)]));
        assert_eq!(s.line_intervals(1, &[0.0, 0.9]), None);
        assert_eq!(s.breakpoints(1), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn validation() {
        let f = half(0, 1, vec![0.0, 0.0], vec![1.0, 1.0], 0.5);
        assert!(BoundaryFragmentSet::new(2, vec![f.clone(), f.clone()], 2, 1.0, 0.5).is_err());
        assert!(BoundaryFragmentSet::new(2, vec![f.clone()], 0, 1.0, 0.5).is_err());
        assert!(BoundaryFragmentSet::new(2, vec![f.clone()], 1, 1.0, 2.0).is_err());
        let s = BoundaryFragmentSet::new(2, vec![f], 1, 0.5, 1.0).unwrap();
        assert_eq!(s.eps0(), 0.25);
        assert_eq!(BoundaryFragmentSet::from_json(&s.to_json()).unwrap(), s);
    }
}
