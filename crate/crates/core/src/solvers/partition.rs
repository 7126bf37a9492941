//! Exact Gibbs sums: log-partition function, entropy and weight-derivative
//! checks.

use super::constraint::ConstraintSet;
use super::exact::{plan, walk_shard, DEFAULT_BUDGET};
use super::anneal::SpinObjective;
use super::model::Model;
use crate::combinatorics::factorial;
use crate::error::{invalid, Result};
use crate::objectives::{Kernel, WeightTensor};
use crate::par::map_indices;

/// Running sums of exp(beta (H - hmax)) and of weighted observables.
#[derive(Debug, Clone)]
struct Acc<const K: usize> {
    hmax: f64,
    sum: f64,
    obs: [f64; K],
}

impl<const K: usize> Acc<K> {
    fn empty() -> Self {
        Self { hmax: f64::NEG_INFINITY, sum: 0.0, obs: [0.0; K] }
    }

    fn push(&mut self, beta: f64, h: f64, g: [f64; K]) {
        if h > self.hmax {
            let r = if self.sum == 0.0 { 0.0 } else { (beta * (self.hmax - h)).exp() };
            self.sum *= r;
            for o in self.obs.iter_mut() {
                *o *= r;
            }
            self.hmax = h;
        }
        let w = (beta * (h - self.hmax)).exp();
        self.sum += w;
        for (o, x) in self.obs.iter_mut().zip(g) {
            *o += w * x;
        }
    }

    fn merge(mut self, other: Self, beta: f64) -> Self {
        if other.sum == 0.0 {
            return self;
        }
        if self.sum == 0.0 {
            return other;
        }
        let (hi, mut lo) = if other.hmax > self.hmax { (other, self) } else { (self, other) };
        let r = (beta * (lo.hmax - hi.hmax)).exp();
        self = hi;
        self.sum += r * lo.sum;
        for (o, x) in self.obs.iter_mut().zip(lo.obs.iter_mut()) {
            *o += r * *x;
        }
        self
    }
}

struct Gibbs<const K: usize> {
    n: usize,
    hmax: f64,
    ln_sum: f64,
    /// Gibbs averages of the observables.
    means: [f64; K],
}

fn gibbs<const K: usize, T: SpinObjective>(
    model: &T,
    constraint: &ConstraintSet,
    beta: f64,
    budget: u128,
    obs: impl Fn(&[u8], f64) -> [f64; K] + Sync,
) -> Result<Gibbs<K>> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("inverse temperature {beta} must be finite and non-negative")));
    }
    let plan = plan(model, constraint, budget)?;
    let parts = map_indices(plan.shards, |s| {
        let mut acc = Acc::<K>::empty();
        walk_shard(model, &plan, s, |labels, h| acc.push(beta, h, obs(labels, h)));
        acc
    });
    let acc = parts.into_iter().fold(Acc::empty(), |a, b| a.merge(b, beta));
    if acc.sum == 0.0 {
        return Err(crate::Error::EmptyConstraintSet);
    }
    let mut means = acc.obs;
    for m in means.iter_mut() {
        *m /= acc.sum;
    }
    Ok(Gibbs { n: model.n(), hmax: acc.hmax, ln_sum: acc.sum.ln(), means })
}

/// Phi(beta) = (1/n) log sum_{A_n} exp(beta H), kept as `beta * hmax + ln_sum`
/// with `ln_sum = log sum exp(beta (H - hmax))` in `[0, log |A_n|]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LogPartition {
    pub n: usize,
    pub beta: f64,
    pub hmax: f64,
    pub ln_sum: f64,
    pub phi: f64,
}

impl LogPartition {
    /// Phi / beta = hmax / n + ln_sum / (n beta).
    pub fn phi_over_beta(&self) -> f64 {
        (self.hmax + self.ln_sum / self.beta) / self.n as f64
    }
}

pub fn log_partition(weights: &WeightTensor, kernel: &Kernel, constraint: &ConstraintSet, beta: f64) -> Result<LogPartition> {
    log_partition_model(&Model::new(weights, kernel)?, constraint, beta)
}

pub fn log_partition_model<T: SpinObjective>(model: &T, constraint: &ConstraintSet, beta: f64) -> Result<LogPartition> {
    let g = gibbs::<0, _>(model, constraint, beta, DEFAULT_BUDGET, |_, _| [])?;
    let n = g.n as f64;
    let phi = if beta == 0.0 { g.ln_sum / n } else { (beta * g.hmax + g.ln_sum) / n };
    Ok(LogPartition { n: g.n, beta, hmax: g.hmax, ln_sum: g.ln_sum, phi })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EntropyCheck {
    /// Central difference of Phi(beta)/beta.
    pub lhs: f64,
    /// -S(mu_beta) / (n beta^2).
    pub rhs: f64,
    /// Gibbs entropy S(mu_beta).
    pub entropy: f64,
}

pub fn entropy_derivative_check(
    weights: &WeightTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    beta: f64,
    h: f64,
) -> Result<EntropyCheck> {
    if !(h > 0.0 && beta > h) {
        return Err(invalid(format!("need 0 < h < beta, got h={h}, beta={beta}")));
    }
    let model = Model::new(weights, kernel)?;
    let up = log_partition_model(&model, constraint, beta + h)?;
    let down = log_partition_model(&model, constraint, beta - h)?;
    let lhs = (up.phi_over_beta() - down.phi_over_beta()) / (2.0 * h);
    let g = gibbs::<1, _>(&model, constraint, beta, DEFAULT_BUDGET, |_, e| [e])?;
    // S = log Z - beta <H> = ln_sum - beta (<H> - hmax)
    let entropy = g.ln_sum - beta * (g.means[0] - g.hmax);
    let rhs = -entropy / (g.n as f64 * beta * beta);
    Ok(EntropyCheck { lhs, rhs, entropy })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ThirdDerivativeCheck {
    /// Richardson-extrapolated finite difference.
    pub fd3: f64,
    /// beta^2 (p!)^3 / n * third Gibbs cumulant of f at the tuple.
    pub analytic: f64,
    /// 6 beta^2 (p!)^3 ||f||^3 / n.
    pub bound: f64,
}

/// Third derivative of G(M) = (1/(n beta)) log Z in the weight at `tuple`,
/// over the unconstrained configuration space, with base step 5e-2.
pub fn third_derivative_bound_check(
    weights: &WeightTensor,
    kernel: &Kernel,
    beta: f64,
    tuple: &[u32],
) -> Result<ThirdDerivativeCheck> {
    third_derivative_check_with(weights, kernel, &ConstraintSet::All, beta, tuple, 5e-2)
}

pub fn third_derivative_check_with(
    weights: &WeightTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    beta: f64,
    tuple: &[u32],
    h: f64,
) -> Result<ThirdDerivativeCheck> {
    let n = weights.n();
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable();
    let x0 = weights.get(&sorted);
    let g_at = |x: f64| -> Result<f64> {
        let mut w = weights.clone();
        w.set(&sorted, x)?;
        let model = Model::new(&w, kernel)?;
        if beta == 0.0 {
            // the beta -> 0 limit differs from the uniform mean energy / n by a
            // constant that does not depend on the weights
            let g = gibbs::<1, _>(&model, constraint, 0.0, DEFAULT_BUDGET, |_, e| [e])?;
            Ok(g.means[0] / n as f64)
        } else {
            Ok(log_partition_model(&model, constraint, beta)?.phi_over_beta())
        }
    };
    let fd = |h: f64| -> Result<f64> {
        Ok((g_at(x0 + 2.0 * h)? - 2.0 * g_at(x0 + h)? + 2.0 * g_at(x0 - h)? - g_at(x0 - 2.0 * h)?) / (2.0 * h * h * h))
    };
    // central differences have an even error series; two Richardson levels
    // remove the h^2 and h^4 terms
    let (f1, f2, f4) = (fd(h)?, fd(h / 2.0)?, fd(h / 4.0)?);
    let r1 = (4.0 * f2 - f1) / 3.0;
    let r2 = (4.0 * f4 - f2) / 3.0;
    let fd3 = (16.0 * r2 - r1) / 15.0;

    let model = Model::new(weights, kernel)?;
    let p = kernel.p();
    let g = gibbs::<3, _>(&model, constraint, beta, DEFAULT_BUDGET, |labels, _| {
        let mut args = [0u8; 8];
        for (a, &v) in args.iter_mut().zip(&sorted) {
            *a = labels[v as usize];
        }
        let f = kernel.eval(&args[..p]);
        [f, f * f, f * f * f]
    })?;
    let [m1, m2, m3] = g.means;
    let pf = factorial(p as u64) as f64;
    let c = beta * beta * pf.powi(3) / n as f64;
    Ok(ThirdDerivativeCheck {
        fd3,
        analytic: c * (m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3)),
        bound: 6.0 * c * kernel.sup_norm().powi(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::PUniformHypergraph;
    use crate::rng::stream;
    use rand::Rng;

    fn random_weights(n: usize, p: usize, seed: u64) -> WeightTensor {
        let mut rng = stream(seed, 0);
        let mut w = WeightTensor::new(n, p).unwrap();
        crate::combinatorics::for_each_subset(n, p, |t| {
            if rng.random::<f64>() < 0.5 {
                w.set(t, rng.random_range(-1.0..1.0)).unwrap();
            }
        });
        w
    }

    #[test]
    fn beta_zero_counts_configurations() {
        let w = random_weights(6, 2, 1);
        let k = Kernel::cut(2, 3).unwrap();
        let lp = log_partition(&w, &k, &ConstraintSet::All, 0.0).unwrap();
        assert!((lp.phi - 3f64.ln()).abs() < 1e-14);
        let lp = log_partition(&w, &Kernel::cut(2, 2).unwrap(), &ConstraintSet::BalancedBisection, 0.0).unwrap();
        assert!((lp.phi - 20f64.ln() / 6.0).abs() < 1e-14);
    }

    #[test]
    fn single_edge_closed_form() {
        let mut g = PUniformHypergraph::new(2, 2, false).unwrap();
        g.add_edge(&[0, 1]).unwrap();
        let w = WeightTensor::adjacency(&g).unwrap();
        let beta = 0.7;
        let lp = log_partition(&w, &Kernel::cut(2, 2).unwrap(), &ConstraintSet::All, beta).unwrap();
        // two agreeing states with H = 0, two disagreeing with H = 2
        let expected = (2.0 + 2.0 * (2.0 * beta).exp()).ln() / 2.0;
        assert!((lp.phi - expected).abs() < 1e-14);
    }

    #[test]
    fn entropy_identity_for_zero_hamiltonian() {
        let w = WeightTensor::new(5, 2).unwrap();
        let c = entropy_derivative_check(&w, &Kernel::cut(2, 3).unwrap(), &ConstraintSet::All, 1.0, 1e-3).unwrap();
        assert!((c.entropy - 5.0 * 3f64.ln()).abs() < 1e-12);
        assert!((c.rhs + 3f64.ln()).abs() < 1e-12);
        assert!((c.lhs - c.rhs).abs() < 1e-5);
    }

    #[test]
    fn third_derivative_matches_cumulant() {
        let w = random_weights(7, 3, 4);
        let k = Kernel::cut(3, 2).unwrap();
        let c = third_derivative_bound_check(&w, &k, 0.5, &[1, 3, 5]).unwrap();
        assert!(c.fd3.abs() <= c.bound);
        assert!((c.fd3 - c.analytic).abs() <= 1e-4 * c.analytic.abs().max(1e-3 * c.bound), "{c:?}");
        let z = third_derivative_bound_check(&w, &k, 0.0, &[1, 3, 5]).unwrap();
        assert!(z.fd3.abs() < 1e-6 && z.analytic == 0.0);
    }
}
