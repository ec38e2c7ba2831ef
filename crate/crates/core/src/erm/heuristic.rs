use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hypothesis::{error_count, Hypothesis};
use super::{ErmMode, ErmReport};
use crate::dist::Dataset;
use crate::nn::{network_from_slots, slot_count, ClassBudget, WeightGrid};
use crate::par;
use crate::sets::NetworkSet;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Proposed moves per restart.
    pub iters: usize,
    /// Initial annealing temperature, in misclassified points.
    pub t0: f64,
    /// Temperature factor per move.
    pub cooling: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 8, iters: 2000, t0: 1.0, cooling: 0.998, seed: 0 }
    }
}

struct Run {
    errors: usize,
    depth: usize,
    slots: Vec<f64>,
    trace: Vec<usize>,
}

fn errors_of(budget: &ClassBudget, depth: usize, slots: &[f64], data: &Dataset) -> usize {
    error_count(&NetworkSet { net: &network_from_slots(budget, depth, slots) }, data)
}

fn restart(budget: &ClassBudget, data: &Dataset, cfg: &SearchConfig, r: usize) -> Run {
    let mut rng = crate::rng::stream(cfg.seed, r as u32, 1);
    let values = WeightGrid::new(budget.c).values();
    let nonzero: Vec<f64> = values.iter().copied().filter(|v| *v != 0.0).collect();
    let depth = r % (budget.effective_depth() + 1);
    let n_slots = slot_count(budget.d, budget.s0, depth);
    let mut slots = vec![0.0; n_slots];
    let k = rng.random_range(0..=budget.s0.min(n_slots));
    for pos in rand::seq::index::sample(&mut rng, n_slots, k) {
        slots[pos] = nonzero[rng.random_range(0..nonzero.len())];
    }
    let mut nnz = k;
    let mut cur = errors_of(budget, depth, &slots, data);
    let mut best = (cur, slots.clone());
    let mut trace = vec![cur];
    let mut temp = cfg.t0;
    for _ in 0..cfg.iters {
        let pos = rng.random_range(0..n_slots);
        let old = slots[pos];
        let new = values[rng.random_range(0..values.len())];
        let grows = old == 0.0 && new != 0.0;
        if new != old && !(grows && nnz >= budget.s0) {
            slots[pos] = new;
            let e = errors_of(budget, depth, &slots, data);
            let delta = e as f64 - cur as f64;
            let accept = delta <= 0.0 || (temp > 0.0 && rng.random::<f64>() < (-delta / temp).exp());
            if accept {
                cur = e;
                if grows {
                    nnz += 1;
                } else if new == 0.0 {
                    nnz -= 1;
                }
                if cur < best.0 {
                    best = (cur, slots.clone());
                }
            } else {
                slots[pos] = old;
            }
        }
        temp *= cfg.cooling;
        trace.push(best.0);
    }
    Run { errors: best.0, depth, slots: best.1, trace }
}

/// Best network found by restarted single-slot search on the width-`s₀`
/// architectures of the class. Restart `r` searches depth
/// `r mod (min{s₀,L₀} + 1)`; moves that worsen the risk are accepted with
/// probability `exp(−Δ/T)`. Deterministic per seed.
pub fn erm_heuristic(budget: &ClassBudget, data: &Dataset, cfg: &SearchConfig) -> Result<ErmReport> {
    budget.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidArgument("ERM on an empty dataset".into()));
    }
    if budget.d != data.d {
        return Err(Error::DimensionMismatch { expected: budget.d, got: data.d });
    }
    let restarts = cfg.restarts.max(1);
    let runs = par::map_indexed(restarts, |r| restart(budget, data, cfg, r));
    let n = data.len() as f64;
    let mut trace = Vec::new();
    let mut running = usize::MAX;
    for run in &runs {
        for &e in &run.trace {
            running = running.min(e);
            trace.push(running as f64 / n);
        }
    }
    let (r, best) = runs.iter().enumerate().min_by_key(|(i, run)| (run.errors, *i)).expect("at least one restart");
    let net = network_from_slots(budget, best.depth, &best.slots);
    Ok(ErmReport {
        hypothesis: Hypothesis::network(net, format!("heuristic search, restart {r}")),
        risk: best.errors as f64 / n,
        errors: best.errors,
        mode: ErmMode::Heuristic,
        candidates: (restarts * (cfg.iters + 1)) as u64,
        index: None,
        seed: cfg.seed,
        trace,
    })
}
