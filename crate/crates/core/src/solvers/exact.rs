//! Exhaustive enumeration over a q-ary modular Gray code.
//!
//! The configuration space is split into shards by the top digits; each shard
//! walks its lower digits so that consecutive configurations differ in one
//! site, and energies are updated incrementally. Any configuration whose
//! running energy comes within a tolerance of the shard's best is re-evaluated
//! from scratch, so maxima are exact and reproducible regardless of drift.

use super::constraint::ConstraintSet;
use super::anneal::SpinObjective;
use super::model::Model;
use super::SolveMethod;
use super::SolveResult;
use crate::error::{Error, Result};
use crate::objectives::{Kernel, SpinConfig, WeightTensor};
use crate::par::map_indices;

/// Default cap on the number of configurations walked.
pub const DEFAULT_BUDGET: u128 = 1 << 25;
const MIN_SHARDS: usize = 64;
const RESYNC: u64 = 1 << 12;

pub(crate) struct Plan {
    pub top: usize,
    pub shards: usize,
    pub target: Option<Vec<usize>>,
    pub walked: u128,
}

pub(crate) fn plan<T: SpinObjective>(model: &T, constraint: &ConstraintSet, budget: u128) -> Result<Plan> {
    let (n, q) = (model.n(), model.q());
    let target = constraint.target_counts(n, q)?;
    let walked = ConstraintSet::All.cardinality(n, q);
    if walked > budget {
        return Err(Error::BudgetExceeded { size: walked, budget });
    }
    let mut top = 0;
    while top < n && q.pow(top as u32) < MIN_SHARDS {
        top += 1;
    }
    Ok(Plan { top, shards: q.pow(top as u32), target, walked })
}

/// Visits every admissible configuration in one shard, passing its energy.
/// Energies within `tol` of the running best are exact.
pub(crate) fn walk_shard<T: SpinObjective>(model: &T, plan: &Plan, shard: usize, mut visit: impl FnMut(&[u8], f64)) {
    let (n, q) = (model.n(), model.q());
    let low = n - plan.top;
    let tol = 1e-9 * (1.0 + model.scale());
    let mut labels = vec![0u8; n];
    let mut s = shard;
    for slot in labels[low..].iter_mut() {
        *slot = (s % q) as u8;
        s /= q;
    }
    let mut counts = vec![0usize; q];
    for &l in &labels {
        counts[l as usize] += 1;
    }
    let admissible = |c: &[usize]| plan.target.as_deref().is_none_or(|t| t == c);
    let mut counter = vec![0u8; low];
    let mut energy = model.energy(&labels);
    let mut state = model.init(labels);
    let mut best = f64::NEG_INFINITY;
    let total = (q as u64).pow(low as u32);
    for step in 0..total {
        if admissible(&counts) {
            if energy >= best - tol {
                energy = model.energy(model.labels(&state));
                best = best.max(energy);
            }
            visit(model.labels(&state), energy);
        }
        if step + 1 == total {
            break;
        }
        // digit to change = number of trailing (q-1) digits of the counter
        let mut j = 0;
        while counter[j] as usize == q - 1 {
            counter[j] = 0;
            j += 1;
        }
        counter[j] += 1;
        let old = model.labels(&state)[j];
        let new = ((old as usize + 1) % q) as u8;
        energy += model.delta_single(&mut state, j, new);
        model.apply_single(&mut state, j, new);
        counts[old as usize] -= 1;
        counts[new as usize] += 1;
        if (step + 1) % RESYNC == 0 {
            energy = model.energy(model.labels(&state));
        }
    }
}

/// Calls `f` on every admissible configuration with its energy. Energies are
/// accurate to rounding; those near the running maximum are exact.
pub fn for_each_config<T: SpinObjective>(
    model: &T,
    constraint: &ConstraintSet,
    budget: u128,
    mut f: impl FnMut(&[u8], f64),
) -> Result<()> {
    let plan = plan(model, constraint, budget)?;
    for s in 0..plan.shards {
        walk_shard(model, &plan, s, &mut f);
    }
    Ok(())
}

pub(crate) fn better(a: (f64, &[u8]), b: (f64, &[u8])) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Global maximum over the constraint set with the default budget.
pub fn exact_max(weights: &WeightTensor, kernel: &Kernel, constraint: &ConstraintSet) -> Result<SolveResult> {
    exact_max_with_budget(weights, kernel, constraint, DEFAULT_BUDGET)
}

/// Global maximum; ties go to the lexicographically smallest configuration.
pub fn exact_max_with_budget(
    weights: &WeightTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    budget: u128,
) -> Result<SolveResult> {
    let model = Model::new(weights, kernel)?;
    exact_max_model(&model, constraint, budget)
}

pub fn exact_max_model<T: SpinObjective>(model: &T, constraint: &ConstraintSet, budget: u128) -> Result<SolveResult> {
    let plan = plan(model, constraint, budget)?;
    let per_shard = map_indices(plan.shards, |s| {
        let mut best: Option<(f64, Vec<u8>)> = None;
        walk_shard(model, &plan, s, |labels, e| {
            if best.as_ref().is_none_or(|(bv, bl)| better((e, labels), (*bv, bl))) {
                best = Some((e, labels.to_vec()));
            }
        });
        best
    });
    let mut best: Option<(f64, Vec<u8>)> = None;
    for cand in per_shard.into_iter().flatten() {
        if best.as_ref().is_none_or(|(bv, bl)| better((cand.0, &cand.1), (*bv, bl))) {
            best = Some(cand);
        }
    }
    let (_, labels) = best.ok_or(Error::EmptyConstraintSet)?;
    let value = model.energy(&labels);
    Ok(SolveResult {
        value,
        config: SpinConfig::new(labels, model.q())?,
        method: SolveMethod::Exact { enumerated: plan.walked, admissible: constraint.cardinality(model.n(), model.q()) },
    })
}
