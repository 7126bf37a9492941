use rand::Rng;

use crate::combinatorics::{binomial, random_subset};
use crate::ensembles::{er_edge_probability, gen_configuration_regular, gen_er, ErVariant};
use crate::error::{invalid, Error, Result};
use crate::objectives::{c1_residual_at, psi_max_and_hessian, sup_norm, Kernel, WeightTensor};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::{ConstraintSet, Model, SolverChoice};
use crate::stats::mean_sem;

const C1_TOL: f64 = 1e-6;
const MAX_ENUMERATED_TYPES: u128 = 100_000;
const SAMPLED_TYPES: usize = 10_000;

/// Finite-n readings of the two sufficient conditions for ER/regular
/// equivalence.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Conditions {
    /// Largest residual sup-norm over the type vectors reachable under the
    /// constraint at this n.
    pub c1_sup_residual: f64,
    pub c1_holds: bool,
    pub m_star: Vec<f64>,
    pub min_eig_neg_hessian: f64,
    pub c2_holds: bool,
}

impl Conditions {
    pub fn exploratory(&self) -> bool {
        !(self.c1_holds || self.c2_holds)
    }
}

fn compositions(n: usize, q: usize, mut f: impl FnMut(&[usize])) {
    fn rec(left: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k == 1 {
            cur.push(left);
            f(cur);
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, k - 1, cur, f);
            cur.pop();
        }
    }
    rec(n, q, &mut Vec::with_capacity(q), &mut f);
}

pub fn check_conditions(kernel: &Kernel, constraint: &ConstraintSet, n: usize) -> Result<Conditions> {
    let q = kernel.q();
    let mut sup = 0.0f64;
    let mut visit = |counts: &[usize]| -> Result<()> {
        let m: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        sup = sup.max(sup_norm(&c1_residual_at(kernel, &m)?));
        Ok(())
    };
    match constraint.target_counts(n, q)? {
        Some(counts) => visit(&counts)?,
        None => {
            let total = binomial((n + q - 1) as u64, (q - 1) as u64);
            if total <= MAX_ENUMERATED_TYPES {
                let mut err = Ok(());
                compositions(n, q, |c| {
                    if err.is_ok() {
                        err = visit(c);
                    }
                });
                err?;
            } else {
                // stars and bars: q-1 bar positions among n+q-1 slots
                let mut rng = stream(n as u64, q as u64);
                for _ in 0..SAMPLED_TYPES {
                    let bars = random_subset(n + q - 1, q - 1, &mut rng);
                    let mut counts = Vec::with_capacity(q);
                    let mut prev = 0usize;
                    for &b in &bars {
                        counts.push(b as usize - prev);
                        prev = b as usize + 1;
                    }
                    counts.push(n + q - 1 - prev);
                    visit(&counts)?;
                }
            }
        }
    }
    let pm = psi_max_and_hessian(kernel)?;
    Ok(Conditions {
        c1_sup_residual: sup,
        c1_holds: sup < C1_TOL,
        m_star: pm.m_star,
        min_eig_neg_hessian: pm.min_eig_neg_hessian,
        c2_holds: pm.c2_holds,
    })
}

fn expected_er_edges(variant: ErVariant, n: usize, p: usize, d: f64) -> f64 {
    let (raw, clamped) = er_edge_probability(n, p, d);
    let per_subset = match variant {
        ErVariant::Bernoulli => clamped,
        ErVariant::Poisson => raw,
    };
    per_subset * binomial(n as u64, p as u64) as f64
}

/// Least-squares slope of y on centred x; zero when x does not vary.
fn cv_slope(x: &[f64], y: &[f64]) -> f64 {
    let k = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / k, y.iter().sum::<f64>() / k);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EquivalenceEstimate {
    pub d: usize,
    pub v_er: f64,
    pub v_er_sem: f64,
    pub v_reg: f64,
    pub v_reg_sem: f64,
    /// Paired mean of V_er - V_reg over replicas.
    pub diff: f64,
    pub diff_sem: f64,
    pub diff_over_sqrt_d: f64,
    pub diff_over_sqrt_d_sem: f64,
    /// Paired difference after removing the linear effect of the ER edge
    /// count around its known mean (a control variate).
    pub diff_cv: f64,
    pub diff_cv_sem: f64,
    pub conditions: Conditions,
    pub exploratory: bool,
}

/// Paired estimates of (1/n) max H on ER and configuration-model instances.
/// Replica `r` draws both instances from stream `r` of one seed, so the pair
/// shares its randomness source.
#[allow(clippy::too_many_arguments)]
pub fn er_vs_regular<R: Rng + ?Sized>(
    kernel: &Kernel,
    constraint: &ConstraintSet,
    n: usize,
    d: usize,
    variant: ErVariant,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<EquivalenceEstimate> {
    let p = kernel.p();
    if !(n * d).is_multiple_of(p) {
        return Err(Error::Divisibility { required: p, value: n * d });
    }
    if replicas < 2 {
        return Err(invalid("need at least two replicas"));
    }
    let conditions = check_conditions(kernel, constraint, n)?;
    let seed = rng.next_u64();
    let nf = n as f64;
    let pairs = map_indices(replicas, |r| -> Result<(f64, f64, f64)> {
        let mut rng = stream(seed, r as u64);
        let er = gen_er(variant, n, p, d as f64, &mut rng)?;
        let edges = er.edge_count() as f64;
        let reg = gen_configuration_regular(n, p, d, &mut rng)?;
        let v_er = solver.solve(&Model::new(&WeightTensor::adjacency(&er)?, kernel)?, constraint, &mut rng)?.0 / nf;
        let v_reg = solver.solve(&Model::new(&WeightTensor::adjacency(&reg)?, kernel)?, constraint, &mut rng)?.0 / nf;
        Ok((v_er, v_reg, edges))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let er = mean_sem(&pairs.iter().map(|x| x.0).collect::<Vec<_>>());
    let reg = mean_sem(&pairs.iter().map(|x| x.1).collect::<Vec<_>>());
    let diff = mean_sem(&pairs.iter().map(|x| x.0 - x.1).collect::<Vec<_>>());
    let expected_edges = expected_er_edges(variant, n, p, d as f64);
    let xs: Vec<f64> = pairs.iter().map(|x| x.2 - expected_edges).collect();
    let ys: Vec<f64> = pairs.iter().map(|x| x.0).collect();
    let b = cv_slope(&xs, &ys);
    let adjusted: Vec<f64> = pairs.iter().zip(&xs).map(|(x, dx)| x.0 - b * dx - x.1).collect();
    let cv = mean_sem(&adjusted);
    let root = (d as f64).sqrt();
    let (dod, dod_sem) = if d == 0 { (0.0, 0.0) } else { (diff.mean / root, diff.sem / root) };
    let exploratory = conditions.exploratory();
    Ok(EquivalenceEstimate {
        d,
        v_er: er.mean,
        v_er_sem: er.sem,
        v_reg: reg.mean,
        v_reg_sem: reg.sem,
        diff: diff.mean,
        diff_sem: diff.sem,
        diff_over_sqrt_d: dod,
        diff_over_sqrt_d_sem: dod_sem,
        diff_cv: cv.mean,
        diff_cv_sem: cv.sem,
        conditions,
        exploratory,
    })
}
