use rand::Rng;

use super::constraint::ConstraintSet;
use super::model::Model;
use super::{SolveMethod, SolveResult};
use crate::error::Result;
use crate::objectives::{Kernel, SpinConfig, WeightTensor};
use crate::par::map_indices;
use crate::rng::stream;

/// Geometric inverse-temperature schedule with independent restarts.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub beta_start: f64,
    pub beta_end: f64,
    pub sweeps: usize,
    pub restarts: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { beta_start: 0.1, beta_end: 20.0, sweeps: 20_000, restarts: 8 }
    }
}

impl Schedule {
    pub fn with_budget(sweeps: usize, restarts: usize) -> Self {
        Self { sweeps, restarts, ..Self::default() }
    }

    pub fn beta(&self, sweep: usize) -> f64 {
        if self.sweeps <= 1 {
            return self.beta_end;
        }
        let t = sweep as f64 / (self.sweeps - 1) as f64;
        self.beta_start * (self.beta_end / self.beta_start).powf(t)
    }
}

/// Objective over label configurations with incremental single-site and
/// label-swap moves. Shared by the annealer and the exhaustive walker.
pub trait SpinObjective: Sync {
    type State: Clone + Send;

    fn n(&self) -> usize;
    fn q(&self) -> usize;
    /// Upper bound on |H| over all configurations.
    fn scale(&self) -> f64;
    fn init(&self, labels: Vec<u8>) -> Self::State;
    fn labels<'a>(&self, state: &'a Self::State) -> &'a [u8];
    /// Energy recomputed from scratch.
    fn energy(&self, labels: &[u8]) -> f64;
    fn delta_single(&self, state: &mut Self::State, i: usize, new: u8) -> f64;
    fn apply_single(&self, state: &mut Self::State, i: usize, new: u8);
    fn delta_swap(&self, state: &mut Self::State, i: usize, j: usize) -> f64;
    fn apply_swap(&self, state: &mut Self::State, i: usize, j: usize);
}

impl SpinObjective for Model {
    type State = Vec<u8>;

    fn n(&self) -> usize {
        Model::n(self)
    }
    fn q(&self) -> usize {
        Model::q(self)
    }
    fn scale(&self) -> f64 {
        Model::scale(self)
    }
    fn init(&self, labels: Vec<u8>) -> Vec<u8> {
        labels
    }
    fn labels<'a>(&self, state: &'a Vec<u8>) -> &'a [u8] {
        state
    }
    fn energy(&self, labels: &[u8]) -> f64 {
        Model::energy(self, labels)
    }
    fn delta_single(&self, state: &mut Vec<u8>, i: usize, new: u8) -> f64 {
        Model::delta_single(self, state, i, new)
    }
    fn apply_single(&self, state: &mut Vec<u8>, i: usize, new: u8) {
        state[i] = new;
    }
    fn delta_swap(&self, state: &mut Vec<u8>, i: usize, j: usize) -> f64 {
        Model::delta_swap(self, state, i, j)
    }
    fn apply_swap(&self, state: &mut Vec<u8>, i: usize, j: usize) {
        state.swap(i, j);
    }
}

/// One annealing run from a random admissible start. Returns the best
/// configuration seen and its recomputed energy.
pub fn anneal_once<T: SpinObjective, R: Rng + ?Sized>(
    target: &T,
    constraint: &ConstraintSet,
    schedule: &Schedule,
    rng: &mut R,
) -> Result<(f64, Vec<u8>)> {
    let (n, q) = (target.n(), target.q());
    let start = constraint.sample(n, q, rng)?;
    let swaps = constraint.preserves_counts();
    let mut state = target.init(start.labels().to_vec());
    let mut energy = target.energy(target.labels(&state));
    let mut best = (energy, target.labels(&state).to_vec());
    // a swap move needs two different labels to exist
    let movable = !swaps || start.counts().iter().filter(|&&c| c > 0).count() > 1;
    if n == 0 || !movable {
        return Ok(best);
    }
    for sweep in 0..schedule.sweeps {
        let beta = schedule.beta(sweep);
        for _ in 0..n {
            let i = rng.random_range(0..n);
            let delta;
            if swaps {
                let j = rng.random_range(0..n);
                let l = target.labels(&state);
                if l[i] == l[j] {
                    continue;
                }
                delta = target.delta_swap(&mut state, i, j);
                if delta >= 0.0 || rng.random::<f64>() < (beta * delta).exp() {
                    target.apply_swap(&mut state, i, j);
                } else {
                    continue;
                }
            } else {
                let old = target.labels(&state)[i];
                let mut new = rng.random_range(0..q as u8 - 1);
                if new >= old {
                    new += 1;
                }
                delta = target.delta_single(&mut state, i, new);
                if delta >= 0.0 || rng.random::<f64>() < (beta * delta).exp() {
                    target.apply_single(&mut state, i, new);
                } else {
                    continue;
                }
            }
            energy += delta;
            if energy > best.0 {
                best.0 = energy;
                best.1.copy_from_slice(target.labels(&state));
            }
        }
        // keep rounding drift of the running energy bounded
        if sweep % 16 == 15 {
            energy = target.energy(target.labels(&state));
        }
    }
    best.0 = target.energy(&best.1);
    Ok(best)
}

/// Best of `schedule.restarts` independent annealing runs. Restart `k` uses
/// stream `k` of a seed drawn from `rng`, so results do not depend on the
/// number of threads.
pub fn anneal_target<T: SpinObjective, R: Rng + ?Sized>(
    target: &T,
    constraint: &ConstraintSet,
    schedule: &Schedule,
    rng: &mut R,
) -> Result<(f64, Vec<u8>)> {
    let seed = rng.next_u64();
    let runs = map_indices(schedule.restarts.max(1), |k| anneal_once(target, constraint, schedule, &mut stream(seed, k as u64)));
    let mut best: Option<(f64, Vec<u8>)> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().is_none_or(|b| super::exact::better((r.0, &r.1), (b.0, &b.1))) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Simulated annealing with Metropolis acceptance. Unconstrained problems use
/// single-site relabeling; count-preserving constraints use label swaps.
pub fn anneal_max<R: Rng + ?Sized>(
    weights: &WeightTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    schedule: &Schedule,
    rng: &mut R,
) -> Result<SolveResult> {
    let model = Model::new(weights, kernel)?;
    let (value, labels) = anneal_target(&model, constraint, schedule, rng)?;
    Ok(SolveResult {
        value,
        config: SpinConfig::new(labels, kernel.q())?,
        method: SolveMethod::Anneal { schedule: *schedule },
    })
}
