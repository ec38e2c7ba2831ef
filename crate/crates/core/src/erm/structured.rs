use serde::{Deserialize, Serialize};

use super::hypothesis::{error_count, Hypothesis};
use super::{ErmMode, ErmReport};
use crate::dist::Dataset;
use crate::par;
use crate::sets::{BoundaryFn, BoundaryFragmentSet, Fragment};
use crate::{Error, Result};

/// Sets `{x : x₁ ≤ t_k}` on each cell `k` of a regular grid with `cells`
/// cells per axis over the last `d − 1` coordinates, thresholds
/// `t_k ∈ 𝒲_c ∩ [0, 1]`. Cells are row-major, first coordinate slowest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridClass {
    pub d: usize,
    pub cells: usize,
    pub c: u32,
}

impl GridClass {
    pub fn new(d: usize, cells: usize, c: u32) -> Result<Self> {
        if d < 2 || cells == 0 || c > 30 {
            return Err(Error::InvalidArgument(format!(
                "grid class needs d ≥ 2, cells ≥ 1, c ≤ 30 (d = {d}, cells = {cells}, c = {c})"
            )));
        }
        Ok(Self { d, cells, c })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.pow(self.d as u32 - 1)
    }

    /// Thresholds per cell: `2^c + 1`.
    pub fn levels(&self) -> u64 {
        (1u64 << self.c) + 1
    }

    /// `ln` of the class size.
    pub fn log_size(&self) -> f64 {
        self.cell_count() as f64 * (self.levels() as f64).ln()
    }

    pub fn cell_of(&self, x: &[f64]) -> usize {
        x[1..]
            .iter()
            .fold(0, |acc, &v| acc * self.cells + ((v * self.cells as f64).floor() as usize).min(self.cells - 1))
    }

    pub fn set(&self, thresholds: &[f64]) -> BoundaryFragmentSet {
        let m = self.cells as f64;
        let fragments = thresholds
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let mut lo = vec![0.0; self.d];
                let mut hi = vec![1.0; self.d];
                let mut rest = k;
                for a in (1..self.d).rev() {
                    let i = rest % self.cells;
                    rest /= self.cells;
                    lo[a] = i as f64 / m;
                    hi[a] = (i + 1) as f64 / m;
                }
                Fragment { j: 0, iota: 1, lo, hi, gamma: BoundaryFn::Constant { value: t } }
            })
            .collect();
        BoundaryFragmentSet { d: self.d, fragments, r: self.cell_count(), eps1: 1.0, eps2: 1.0 }
    }
}

/// Best threshold for one cell: smallest grid value among the minimizers.
fn best_threshold(mut pts: Vec<(f64, u8)>, c: u32) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = (1u64 << c) as f64;
    let ones = pts.iter().filter(|p| p.1 == 1).count() as i64;
    // t below every point
    let mut best = if pts.first().is_none_or(|p| p.0 > 0.0) { (ones, 0.0) } else { (i64::MAX, 0.0) };
    let mut below = 0i64; // errors among points ≤ t minus ones lost
    let mut i = 0;
    while i < pts.len() {
        let v = pts[i].0;
        while i < pts.len() && pts[i].0 == v {
            below += if pts[i].1 == 0 { 1 } else { -1 };
            i += 1;
        }
        let t = (v * scale).ceil() / scale;
        let next = pts.get(i).map_or(f64::INFINITY, |p| p.0);
        if t < next && t <= 1.0 {
            let e = ones + below;
            if e < best.0 {
                best = (e, t);
            }
        }
    }
    best.1
}

/// Exact empirical risk minimizer over `class`: the risk separates across
/// cells, so each threshold is chosen independently.
pub fn erm_structured(class: &GridClass, data: &Dataset) -> Result<ErmReport> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("ERM on an empty dataset".into()));
    }
    if class.d != data.d {
        return Err(Error::DimensionMismatch { expected: class.d, got: data.d });
    }
    let mut by_cell: Vec<Vec<(f64, u8)>> = vec![Vec::new(); class.cell_count()];
    for (x, &y) in data.points.iter().zip(&data.labels) {
        by_cell[class.cell_of(x)].push((x[0], y));
    }
    let thresholds = par::map_indexed(by_cell.len(), |k| best_threshold(by_cell[k].clone(), class.c));
    let set = class.set(&thresholds);
    let errors = error_count(&set, data);
    Ok(ErmReport {
        hypothesis: Hypothesis::fragments(
            set,
            format!("cell-threshold ERM, {} cells, c = {}", class.cell_count(), class.c),
        ),
        risk: errors as f64 / data.len() as f64,
        errors,
        mode: ErmMode::ExactStructured,
        candidates: class.cell_count() as u64 * class.levels(),
        index: None,
        seed: data.seed,
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::TsybakovDistribution;

    #[test]
    fn single_cell_threshold() {
        let pts = vec![(0.1, 1), (0.3, 1), (0.4, 0), (0.8, 0)];
        assert_eq!(best_threshold(pts, 3), 0.375);
        // ties: all-zero labels choose 0
        assert_eq!(best_threshold(vec![(0.5, 0), (0.7, 0)], 2), 0.0);
        // all ones: threshold 1 (first grid value ≥ 0.7)
        assert_eq!(best_threshold(vec![(0.5, 1), (0.7, 1)], 2), 0.75);
        assert_eq!(best_threshold(Vec::new(), 4), 0.0);
    }

    #[test]
    fn matches_exhaustive_search() {
        let q = TsybakovDistribution::single_boundary(
            2,
            BoundaryFn::Sine { offset: 0.5, amplitude: 0.2, frequency: 1.0 },
            1.0,
            0.5,
        )
        .unwrap();
        let class = GridClass::new(2, 2, 3).unwrap();
        for seed in 0..5 {
            let ds = q.sample(40, seed);
            let r = erm_structured(&class, &ds).unwrap();
            let grid: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
            let mut best = usize::MAX;
            for &a in &grid {
                for &b in &grid {
                    best = best.min(error_count(&class.set(&[a, b]), &ds));
                }
            }
            assert_eq!(r.errors, best);
        }
    }
}
