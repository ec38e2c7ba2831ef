use crate::{Error, Result};

/// Largest grid exponent handled exactly. Beyond this, dyadic values lose
/// their exact double representation in sums of moderately sized terms.
pub const MAX_EXPONENT: u32 = 52;

/// The grid {k·2^-c : |k| ≤ 2^c}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightGrid {
    pub c: u32,
}

impl WeightGrid {
    pub fn new(c: u32) -> Self {
        Self { c }
    }

    pub fn step(&self) -> f64 {
        (-(self.c as f64)).exp2()
    }

    pub fn contains(&self, v: f64) -> bool {
        v.abs() <= 1.0 && matches!(dyadic_exponent(v), Some(e) if e <= self.c)
    }

    /// All grid values in ascending order.
    pub fn values(&self) -> Vec<f64> {
        let n = 1i64 << self.c;
        (-n..=n).map(|k| from_pair(k, self.c)).collect()
    }

    /// Nonzero grid values in ascending order.
    pub fn nonzero_values(&self) -> Vec<f64> {
        self.values().into_iter().filter(|v| *v != 0.0).collect()
    }

    pub fn check(&self, v: f64) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OffGrid { value: v, c: self.c })
        }
    }
}

/// Smallest `c` with `v·2^c` an integer, if it is at most [`MAX_EXPONENT`].
pub fn dyadic_exponent(v: f64) -> Option<u32> {
    if !v.is_finite() {
        return None;
    }
    let mut x = v;
    for c in 0..=MAX_EXPONENT {
        if x.fract() == 0.0 {
            return Some(c);
        }
        x *= 2.0;
    }
    None
}

/// Exact `(k, c)` with `v = k·2^-c` and `c` minimal.
pub fn to_pair(v: f64) -> Option<(i64, u32)> {
    let c = dyadic_exponent(v)?;
    Some(((v * (c as f64).exp2()) as i64, c))
}

pub fn from_pair(k: i64, c: u32) -> f64 {
    k as f64 * (-(c as f64)).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        let g = WeightGrid::new(1);
        assert_eq!(g.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.nonzero_values().len(), 4);
        assert!(g.contains(1.0));
        assert!(!g.contains(0.25));
        assert!(!g.contains(1.5));
        assert!(WeightGrid::new(0).contains(1.0));
    }

    #[test]
    fn exponents_and_pairs() {
        assert_eq!(dyadic_exponent(0.0), Some(0));
        assert_eq!(dyadic_exponent(0.375), Some(3));
        assert_eq!(dyadic_exponent(0.1), None);
        assert_eq!(to_pair(-0.75), Some((-3, 2)));
        assert_eq!(from_pair(-3, 2), -0.75);
    }
}
