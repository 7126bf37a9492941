use rand::Rng;

use super::problem::Problem;
use crate::ensembles::ErVariant;
use crate::error::{invalid, Result};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::SolverChoice;
use crate::stats::mean_sem;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoefficientRow {
    pub d: f64,
    pub leading: f64,
    pub scale: f64,
    pub value: f64,
    pub value_sem: f64,
    pub coefficient: f64,
    pub sem: f64,
}

/// Estimates the sqrt(d) coefficient of the optimum at every d of the grid.
/// Replica `r` at grid point `k` uses stream `r` of the k-th seed drawn from
/// `rng`.
pub fn sqrt_d_coefficient<R: Rng + ?Sized>(
    problem: Problem,
    n: usize,
    d_grid: &[f64],
    variant: ErVariant,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<Vec<CoefficientRow>> {
    problem.validate()?;
    if replicas < 2 {
        return Err(invalid("need at least two replicas"));
    }
    let seeds: Vec<u64> = d_grid.iter().map(|_| rng.next_u64()).collect();
    d_grid
        .iter()
        .zip(seeds)
        .map(|(&d, seed)| {
            if !(d > 0.0) {
                return Err(invalid(format!("average degree d={d} must be positive")));
            }
            let values = map_indices(replicas, |r| problem.sample_value(n, d, variant, solver, &mut stream(seed, r as u64)))
                .into_iter()
                .collect::<Result<Vec<f64>>>()?;
            let s = mean_sem(&values);
            let scale = problem.scale(d);
            Ok(CoefficientRow {
                d,
                leading: problem.leading(d),
                scale,
                value: s.mean,
                value_sem: s.sem,
                coefficient: problem.coefficient(s.mean, d),
                sem: s.sem / scale.abs(),
            })
        })
        .collect()
}
