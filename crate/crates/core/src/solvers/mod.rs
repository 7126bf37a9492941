//! Exact enumeration, simulated annealing and exact Gibbs sums.

mod anneal;
mod constraint;
mod dense;
mod exact;
mod model;
mod partition;

pub use anneal::{anneal_max, anneal_once, anneal_target, SpinObjective, Schedule};
pub use constraint::ConstraintSet;
pub use dense::{DenseIsing, DenseState};
pub use exact::{exact_max, exact_max_model, exact_max_with_budget, for_each_config, DEFAULT_BUDGET};
pub use model::Model;
pub use partition::{
    entropy_derivative_check, log_partition, log_partition_model, third_derivative_bound_check,
    third_derivative_check_with, EntropyCheck, LogPartition, ThirdDerivativeCheck,
};

use crate::objectives::SpinConfig;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SolveMethod {
    Exact { enumerated: u128, admissible: u128 },
    Anneal { schedule: Schedule },
}

/// Best configuration found. `value` is always the Hamiltonian of `config`
/// recomputed from scratch.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolveResult {
    pub value: f64,
    pub config: SpinConfig,
    pub method: SolveMethod,
}

/// How a surrogate or experiment maximizes an objective.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Exact,
    Anneal(Schedule),
}

impl Default for SolverChoice {
    fn default() -> Self {
        Self::Anneal(Schedule::default())
    }
}

impl SolverChoice {
    /// Best value and configuration of `target` over `constraint`.
    pub fn solve<T: SpinObjective, R: rand::Rng + ?Sized>(
        &self,
        target: &T,
        constraint: &ConstraintSet,
        rng: &mut R,
    ) -> crate::Result<(f64, Vec<u8>)> {
        match self {
            Self::Exact => {
                let r = exact_max_model(target, constraint, DEFAULT_BUDGET)?;
                Ok((r.value, r.config.labels().to_vec()))
            }
            Self::Anneal(s) => anneal_target(target, constraint, s, rng),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Exact => "exact".into(),
            Self::Anneal(s) => format!("anneal(sweeps={},restarts={})", s.sweeps, s.restarts),
        }
    }
}
