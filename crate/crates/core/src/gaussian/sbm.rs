//! Curie-Weiss plus SK surrogate for planted bisection:
//! (1/n) E max_sigma [ (xi/n) <1, sigma>^2 + sum_{i,j} J_ij sigma_i sigma_j / sqrt(n) ]
//! with J a GOE matrix.

use rand::Rng;

use super::tensor::GoeMatrix;
use crate::error::{invalid, Result};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::{ConstraintSet, DenseIsing, SolverChoice};
use crate::stats::{mean_sem, MeanSem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SbmConstraint {
    Balanced,
    Unconstrained,
}

/// Dense objective for one GOE draw.
pub fn sbm_objective(j: &GoeMatrix, xi: f64) -> Result<DenseIsing> {
    let n = j.n();
    let nf = n as f64;
    let mut m = DenseIsing::new(n);
    // (xi/n) <1,sigma>^2 = xi + (2 xi / n) sum_{i<j} sigma_i sigma_j
    m.add_constant(xi);
    for i in 0..n {
        m.add_constant(j.get(i, i) / nf.sqrt());
        for k in i + 1..n {
            m.add_pair(i, k, 2.0 * xi / nf + 2.0 * j.get(i, k) / nf.sqrt())?;
        }
    }
    Ok(m)
}

/// Per-replica (balanced, unconstrained) values on shared disorder. The
/// unconstrained value is never reported below the balanced one, since every
/// balanced configuration is also unconstrained.
pub fn sbm_surrogate_paired<R: Rng + ?Sized>(
    n: usize,
    xi: f64,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<Vec<(f64, f64)>> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(invalid(format!("balanced bisection needs even n, got {n}")));
    }
    let seed = rng.next_u64();
    map_indices(replicas, |r| -> Result<(f64, f64)> {
        let mut rng = stream(seed, r as u64);
        let j = GoeMatrix::sample(n, &mut rng);
        let m = sbm_objective(&j, xi)?;
        let bal = solver.solve(&m, &ConstraintSet::BalancedBisection, &mut rng)?.0 / n as f64;
        let unc = solver.solve(&m, &ConstraintSet::All, &mut rng)?.0 / n as f64;
        Ok((bal, unc.max(bal)))
    })
    .into_iter()
    .collect()
}

/// Mean and standard error of the surrogate over `replicas` GOE draws.
pub fn sbm_surrogate<R: Rng + ?Sized>(
    n: usize,
    xi: f64,
    constraint: SbmConstraint,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<MeanSem> {
    if replicas < 2 {
        return Err(invalid("need at least two replicas"));
    }
    let set = match constraint {
        SbmConstraint::Balanced => {
            if !n.is_multiple_of(2) {
                return Err(invalid(format!("balanced bisection needs even n, got {n}")));
            }
            ConstraintSet::BalancedBisection
        }
        SbmConstraint::Unconstrained => ConstraintSet::All,
    };
    let seed = rng.next_u64();
    let values = map_indices(replicas, |r| -> Result<f64> {
        let mut rng = stream(seed, r as u64);
        let j = GoeMatrix::sample(n, &mut rng);
        Ok(solver.solve(&sbm_objective(&j, xi)?, &set, &mut rng)?.0 / n as f64)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(mean_sem(&values))
}
