use super::hypothesis::{error_count, Hypothesis};
use super::{ErmMode, ErmReport};
use crate::dist::Dataset;
use crate::nn::{ClassBudget, ClassEnumerator};
use crate::par;
use crate::sets::NetworkSet;
use crate::{Error, Result};

const CHUNK: u64 = 1024;

/// Minimizer of the empirical risk over the enumerated class, the first in
/// canonical order among ties. Budgets whose count bound exceeds `limit`
/// are refused with [`Error::BudgetTooLarge`].
pub fn erm_exact(budget: &ClassBudget, data: &Dataset, limit: u64) -> Result<ErmReport> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("ERM on an empty dataset".into()));
    }
    if budget.d != data.d {
        return Err(Error::DimensionMismatch { expected: budget.d, got: data.d });
    }
    let en = ClassEnumerator::new(*budget, limit)?;
    let chunks = en.len().div_ceil(CHUNK) as usize;
    let best = par::map_indexed(chunks, |c| {
        let lo = c as u64 * CHUNK;
        let hi = (lo + CHUNK).min(en.len());
        (lo..hi).map(|i| (error_count(&NetworkSet { net: &en.get(i) }, data), i)).min().expect("non-empty chunk")
    });
    let (errors, idx) = best.into_iter().min().expect("class contains the zero network");
    Ok(ErmReport {
        hypothesis: Hypothesis::network(en.get(idx), format!("exact ERM, canonical index {idx}")),
        risk: errors as f64 / data.len() as f64,
        errors,
        mode: ErmMode::Exact,
        candidates: en.len(),
        index: Some(idx),
        seed: data.seed,
        trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(points: Vec<Vec<f64>>, labels: Vec<u8>) -> Dataset {
        Dataset::new(points[0].len(), points, labels, 0).unwrap()
    }

    #[test]
    fn separable_data_reaches_zero() {
        // R(Φ)(x) = x on [0,1] equals 1 only at x = 1
        let ds = data(vec![vec![1.0], vec![0.5], vec![0.0]], vec![1, 0, 0]);
        let r = erm_exact(&ClassBudget::new(1, 1, 2, 1), &ds, 1_000_000).unwrap();
        assert_eq!(r.errors, 0);
        assert_eq!(r.mode, ErmMode::Exact);
    }

    #[test]
    fn ties_pick_first_index() {
        // all-zero labels: the zero network (index 0) already has risk 0
        let ds = data(vec![vec![0.3, 0.6], vec![0.9, 0.1]], vec![0, 0]);
        let r = erm_exact(&ClassBudget::new(2, 1, 2, 0), &ds, 1_000_000).unwrap();
        assert_eq!((r.errors, r.index), (0, Some(0)));
        let again = erm_exact(&ClassBudget::new(2, 1, 2, 0), &ds, 1_000_000).unwrap();
        assert_eq!(again.index, r.index);
    }

    #[test]
    fn oversize_budget_refused() {
        let ds = data(vec![vec![0.3, 0.6]], vec![1]);
        let e = erm_exact(&ClassBudget::new(2, 3, 6, 4), &ds, 1_000_000).unwrap_err();
        assert!(matches!(e, Error::BudgetTooLarge { .. }));
    }
}
