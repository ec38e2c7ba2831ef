//! The finite class of networks with at most `L₀` layers, sparsity at most
//! `s₀` and weights on `𝒲_c`, its counting bound, and a canonical
//! enumeration of it.
//!
//! Canonical order: depth ascending (0, 1, …, min{s₀, L₀}); within a depth,
//! number of nonzero slots ascending; then slot subsets in lexicographic
//! order; then values with the last chosen slot varying fastest, each slot
//! running through the nonzero grid values in ascending order. Slots are laid
//! out layer-major and entry-major: `W₁` row by row, `b₁`, `W₂`, `b₂`, …,
//! `W_{L+1}`. Hidden widths are fixed to `s₀`, the width-bounded
//! representatives of the class.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::grid::WeightGrid;
use super::network::{Layer, Matrix, Network};
use crate::{Error, Result};

/// Budgets whose counting bound exceeds this are refused by default.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBudget {
    pub d: usize,
    #[serde(rename = "L0")]
    pub l0: usize,
    pub s0: usize,
    pub c: u32,
}

impl ClassBudget {
    pub fn new(d: usize, l0: usize, s0: usize, c: u32) -> Self {
        Self { d, l0, s0, c }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s0 <= 1 {
            return Err(Error::InvalidBudget(format!("s0 must exceed 1, got {}", self.s0)));
        }
        if self.d == 0 {
            return Err(Error::InvalidBudget("input dimension must be positive".into()));
        }
        Ok(())
    }

    /// Only the last `min{s₀, L₀}` layers can carry nonzero weights.
    pub fn effective_depth(&self) -> usize {
        self.s0.min(self.l0)
    }
}

/// `((d·s₀ + min{s₀,L₀}(s₀+1)²)·2^{c+2})^{s₀}`, exactly.
pub fn count_bound(b: &ClassBudget) -> BigUint {
    let v = BigUint::from(b.d * b.s0 + b.effective_depth() * (b.s0 + 1) * (b.s0 + 1));
    let base = v << (b.c as usize + 2);
    num_traits::pow(base, b.s0)
}

/// Natural logarithm of [`count_bound`], without forming the integer.
pub fn log_count_bound(b: &ClassBudget) -> f64 {
    let v = (b.d * b.s0 + b.effective_depth() * (b.s0 + 1) * (b.s0 + 1)) as f64;
    b.s0 as f64 * (v.ln() + (b.c as f64 + 2.0) * std::f64::consts::LN_2)
}

/// Number of weight/shift slots of the width-`s₀` architecture of depth `l`.
pub fn slot_count(d: usize, w: usize, l: usize) -> usize {
    if l == 0 {
        d
    } else {
        w * d + (l - 1) * w * w + l * w + w
    }
}

fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact number of configurations produced by the canonical enumeration.
pub fn enumerated_count(b: &ClassBudget) -> BigUint {
    let q = BigUint::from(2u64) << (b.c as usize);
    let mut total = BigUint::zero();
    for l in 0..=b.effective_depth() {
        let v = slot_count(b.d, b.s0, l);
        for k in 0..=b.s0 {
            total += binom(v, k) * num_traits::pow(q.clone(), k);
        }
    }
    total
}

struct Block {
    depth: usize,
    k: usize,
    slots: usize,
    start: u64,
    size: u64,
}

/// Random-access enumeration of a class, indexed by canonical position.
pub struct ClassEnumerator {
    budget: ClassBudget,
    values: Vec<f64>,
    blocks: Vec<Block>,
    len: u64,
}

impl ClassEnumerator {
    pub fn new(budget: ClassBudget, limit: u64) -> Result<Self> {
        budget.validate()?;
        let bound = count_bound(&budget);
        if bound > BigUint::from(limit) {
            return Err(Error::BudgetTooLarge { bound: bound.to_string(), limit });
        }
        let values = WeightGrid::new(budget.c).nonzero_values();
        let q = values.len() as u64;
        let mut blocks = Vec::new();
        let mut start = 0u64;
        for depth in 0..=budget.effective_depth() {
            let slots = slot_count(budget.d, budget.s0, depth);
            for k in 0..=budget.s0.min(slots) {
                let size =
                    (binom(slots, k) * BigUint::from(q.pow(k as u32))).to_u64().expect("bounded by the count bound");
                blocks.push(Block { depth, k, slots, start, size });
                start += size;
            }
        }
        Ok(Self { budget, values, blocks, len: start })
    }

    pub fn budget(&self) -> ClassBudget {
        self.budget
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The network at canonical position `idx`.
    pub fn get(&self, idx: u64) -> Network {
        assert!(idx < self.len, "index {idx} out of range");
        let bi = self.blocks.partition_point(|b| b.start + b.size <= idx);
        let block = &self.blocks[bi];
        let r = idx - block.start;
        let q = self.values.len() as u64;
        let qk = q.pow(block.k as u32);
        let comb = unrank_combination(block.slots, block.k, r / qk);
        let mut val = r % qk;
        let mut slot_vals = vec![0.0; block.slots];
        for &slot in comb.iter().rev() {
            slot_vals[slot] = self.values[(val % q) as usize];
            val /= q;
        }
        self.build(block.depth, &slot_vals)
    }

    pub fn iter(&self) -> impl Iterator<Item = Network> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn build(&self, depth: usize, slots: &[f64]) -> Network {
        network_from_slots(&self.budget, depth, slots)
    }
}

/// The width-`s₀` network of depth `depth` whose slots (in canonical
/// layout) hold `slots`. Values must lie on `𝒲_c`.
pub fn network_from_slots(budget: &ClassBudget, depth: usize, slots: &[f64]) -> Network {
    let (d, w) = (budget.d, budget.s0);
    assert_eq!(slots.len(), slot_count(d, w, depth), "slot vector length");
    let mut pos = 0;
    let mut take = |n: usize| {
        let s = &slots[pos..pos + n];
        pos += n;
        s.to_vec()
    };
    let mut layers = Vec::with_capacity(depth);
    let mut cols = d;
    for _ in 0..depth {
        let wm = Matrix::from_dense(w, cols, &take(w * cols));
        let b = take(w);
        layers.push(Layer::new(wm, b));
        cols = w;
    }
    let out = Matrix::from_dense(1, cols, &take(cols));
    Network::new(layers, out).and_then(|n| n.with_grid(budget.c)).expect("grid values")
}

/// Lexicographic unranking of `k`-subsets of `0..n`.
fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        let mut c = next;
        loop {
            let rest = binom(n - c - 1, k - i - 1).to_u64().expect("fits");
            if rank < rest {
                break;
            }
            rank -= rest;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

/// Realization values on `probes`, quantized at 1e-9, for realization-level
/// de-duplication.
pub fn fingerprint(net: &Network, probes: &[Vec<f64>]) -> Vec<i64> {
    probes.iter().flat_map(|x| net.eval(x)).map(|v| (v / crate::TOL).round() as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn bound_formula() {
        assert_eq!(count_bound(&ClassBudget::new(2, 1, 2, 1)), BigUint::from(10816u32));
        // min{s0, L0} = 2 when L0 = 5
        let b = ClassBudget::new(2, 5, 2, 1);
        assert_eq!(count_bound(&b), BigUint::from(((4 + 2 * 9) * 8u64).pow(2)));
        let lb = log_count_bound(&b);
        assert!((lb - (count_bound(&b).to_f64().unwrap()).ln()).abs() < 1e-9);
    }

    #[test]
    fn refusal() {
        assert!(matches!(ClassEnumerator::new(ClassBudget::new(2, 1, 1, 1), 1000), Err(Error::InvalidBudget(_))));
        assert!(matches!(ClassEnumerator::new(ClassBudget::new(2, 1, 2, 1), 1000), Err(Error::BudgetTooLarge { .. })));
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        let b = ClassBudget::new(2, 1, 2, 1);
        let e = ClassEnumerator::new(b, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(e.len(), 506);
        assert_eq!(BigUint::from(e.len()), enumerated_count(&b));
        let mut seen = HashSet::new();
        for net in e.iter() {
            assert!(net.sparsity() <= 2);
            assert!(net.depth() <= 1);
            assert!(net.layers().iter().all(|l| l.weights.rows() <= 2));
            assert!(seen.insert(net.to_json()));
        }
        assert!(BigUint::from(seen.len()) <= count_bound(&b));
    }

    #[test]
    fn canonical_order_starts_with_empty_linear_net() {
        let e = ClassEnumerator::new(ClassBudget::new(2, 1, 2, 1), DEFAULT_ENUMERATION_LIMIT).unwrap();
        let first = e.get(0);
        assert_eq!(first.depth(), 0);
        assert_eq!(first.sparsity(), 0);
        // next: first slot takes the smallest nonzero value
        assert_eq!(e.get(1).output().get(0, 0), -1.0);
        assert_eq!(e.get(2).output().get(0, 0), -0.5);
    }

    #[test]
    fn combination_unranking_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..10).map(|r| unrank_combination(5, 2, r)).collect();
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[3], vec![0, 4]);
        assert_eq!(all[9], vec![3, 4]);
    }

    #[test]
    fn distinct_realizations_at_small_budget() {
        let e = ClassEnumerator::new(ClassBudget::new(2, 1, 2, 1), DEFAULT_ENUMERATION_LIMIT).unwrap();
        let probes: Vec<Vec<f64>> =
            (0..5).flat_map(|i| (0..5).map(move |j| vec![i as f64 / 4.0, j as f64 / 4.0])).collect();
        let distinct: HashSet<Vec<i64>> = e.iter().map(|n| fingerprint(&n, &probes)).collect();
        assert!(distinct.len() < e.len() as usize);
        assert!(distinct.len() > 10);
    }
}
