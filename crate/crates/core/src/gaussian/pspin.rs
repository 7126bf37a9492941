//! Ground-state density of the p-spin model with an iid Gaussian array:
//! (1/n) E max_sigma sum over all index tuples G sigma_i1..sigma_ip / n^((p-1)/2).
//!
//! The objective depends on G only through the sums of G over the orderings
//! of each index multiset, so each multiset gets one Gaussian with variance
//! equal to its number of orderings. This has the same law as the full array
//! and needs O(C(n+p-1, p)) draws instead of n^p.

use rand::Rng;
use rand_distr::StandardNormal;

use super::tensor::{GaussianTensor, TensorMode};
use crate::combinatorics::{factorial, for_each_multiset, orderings};
use crate::error::{invalid, Result};
use crate::objectives::{Kernel, WeightTensor};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::{ConstraintSet, DenseIsing, Model, SolverChoice};
use crate::stats::{line_fit, mean_sem};

/// Dense objective for p = 2 or 3 from multiset sums `coef(t)` (already
/// divided by n^((p-1)/2)).
fn dense_from_multisets(n: usize, p: usize, mut coef: impl FnMut(&[u32]) -> f64) -> Result<DenseIsing> {
    let mut m = DenseIsing::new(n);
    let mut err = Ok(());
    for_each_multiset(n, p, |t| {
        let c = coef(t);
        let r = match (p, t) {
            (2, [i, j]) if i == j => {
                m.add_constant(c);
                Ok(())
            }
            (2, [i, j]) => m.add_pair(*i as usize, *j as usize, c),
            (3, [i, j, k]) if i == j && j == k => {
                m.add_field(*i as usize, c);
                Ok(())
            }
            // sigma_i^2 sigma_k = sigma_k
            (3, [i, j, k]) if i == j => {
                m.add_field(*k as usize, c);
                Ok(())
            }
            (3, [i, j, k]) if j == k => {
                m.add_field(*i as usize, c);
                Ok(())
            }
            (3, [i, j, k]) => m.add_triple(*i as usize, *j as usize, *k as usize, c),
            _ => Err(invalid("dense p-spin supports p = 2 and p = 3")),
        };
        if err.is_ok() {
            err = r;
        }
    });
    err.map(|_| m)
}

fn norm(n: usize, p: usize) -> f64 {
    (n as f64).powf((p as f64 - 1.0) / 2.0)
}

/// Dense p-spin objective sampled through multiset sums (p = 2 or 3).
pub fn pspin_dense<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<DenseIsing> {
    let z = norm(n, p);
    dense_from_multisets(n, p, |t| (orderings(t) as f64).sqrt() * rng.sample::<f64, _>(StandardNormal) / z)
}

/// Dense p-spin objective aggregated exactly from an iid array.
pub fn pspin_dense_from_array(array: &GaussianTensor) -> Result<DenseIsing> {
    if array.mode() != TensorMode::IidArray {
        return Err(invalid("expected an iid array"));
    }
    let (n, p) = (array.n(), array.p());
    let z = norm(n, p);
    let mut perm = vec![0u32; p];
    dense_from_multisets(n, p, |t| {
        let mut sum = 0.0;
        // every ordered tuple whose sorted form is t
        distinct_orderings(t, &mut perm, &mut |o| sum += array.get(o));
        sum / z
    })
}

fn distinct_orderings(t: &[u32], buf: &mut [u32], f: &mut impl FnMut(&[u32])) {
    fn rec(rest: &mut Vec<u32>, pos: usize, buf: &mut [u32], f: &mut impl FnMut(&[u32])) {
        if rest.is_empty() {
            f(buf);
            return;
        }
        let mut k = 0;
        while k < rest.len() {
            let v = rest.remove(k);
            buf[pos] = v;
            rec(rest, pos + 1, buf, f);
            rest.insert(k, v);
            // skip equal values to avoid duplicate orderings
            while k < rest.len() && rest[k] == v {
                k += 1;
            }
        }
    }
    let mut rest = t.to_vec();
    rec(&mut rest, 0, buf, f);
}

/// Generic sparse-storage p-spin objective (any p) under the XOR kernel.
pub fn pspin_model<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Result<Model> {
    let z = norm(n, p);
    let pf = factorial(p as u64) as f64;
    let mut w = WeightTensor::with_repeats(n, p)?;
    let mut err = Ok(());
    for_each_multiset(n, p, |t| {
        let c = (orderings(t) as f64).sqrt() * rng.sample::<f64, _>(StandardNormal) / z;
        if err.is_ok() {
            err = w.set(t, c / pf);
        }
    });
    err?;
    Model::new(&w, &Kernel::xor(p)?)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GroundStateEstimate {
    pub n: usize,
    pub p: usize,
    pub mean: f64,
    pub sem: f64,
    pub values: Vec<f64>,
}

/// Monte Carlo estimate of the ground-state density over `replicas`
/// independent disorder draws. Replica `r` uses stream `r` of a seed drawn
/// from `rng`.
pub fn pspin_ground_state<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<GroundStateEstimate> {
    if replicas < 2 {
        return Err(invalid("need at least two replicas for a standard error"));
    }
    if p < 2 || n < p {
        return Err(invalid(format!("need 2 <= p <= n, got n={n}, p={p}")));
    }
    let seed = rng.next_u64();
    let values = map_indices(replicas, |r| -> Result<f64> {
        let mut rng = stream(seed, r as u64);
        let best = if p <= 3 {
            let m = pspin_dense(n, p, &mut rng)?;
            solver.solve(&m, &ConstraintSet::All, &mut rng)?.0
        } else {
            let m = pspin_model(n, p, &mut rng)?;
            solver.solve(&m, &ConstraintSet::All, &mut rng)?.0
        };
        Ok(best / n as f64)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let s = mean_sem(&values);
    Ok(GroundStateEstimate { n, p, mean: s.mean, sem: s.sem, values })
}

/// Finite-size fit a + b n^(-2/3), weighted by the squared standard errors.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub limit_sem: f64,
    pub slope: f64,
    pub exponent: f64,
}

pub fn extrapolate(points: &[GroundStateEstimate]) -> Result<Extrapolation> {
    let exponent = -2.0 / 3.0;
    let x: Vec<f64> = points.iter().map(|e| (e.n as f64).powf(exponent)).collect();
    let y: Vec<f64> = points.iter().map(|e| e.mean).collect();
    let s: Vec<f64> = points.iter().map(|e| e.sem.max(1e-12)).collect();
    let fit = line_fit(&x, &y, Some(&s))?;
    Ok(Extrapolation { limit: fit.intercept, limit_sem: fit.intercept_se, slope: fit.slope, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gen_iid_array;
    use crate::solvers::SpinObjective;

    #[test]
    fn aggregation_matches_full_array_sum() {
        for p in [2usize, 3] {
            let n = 5;
            let a = gen_iid_array(n, p, &mut stream(p as u64, 0)).unwrap();
            let m = pspin_dense_from_array(&a).unwrap();
            let labels = [0u8, 1, 1, 0, 1];
            let s: Vec<f64> = labels.iter().map(|&l| crate::objectives::pm1(l)).collect();
            let mut naive = 0.0;
            let mut idx = vec![0u32; p];
            for code in 0..n.pow(p as u32) {
                let mut c = code;
                for slot in idx.iter_mut().rev() {
                    *slot = (c % n) as u32;
                    c /= n;
                }
                naive += a.get(&idx) * idx.iter().map(|&i| s[i as usize]).product::<f64>();
            }
            naive /= norm(n, p);
            assert!((m.energy(&labels) - naive).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        for p in [2usize, 3] {
            let d = pspin_dense(6, p, &mut stream(9, 0)).unwrap();
            let s = pspin_model(6, p, &mut stream(9, 0)).unwrap();
            for code in 0u32..64 {
                let labels: Vec<u8> = (0..6).map(|i| ((code >> i) & 1) as u8).collect();
                assert!((d.energy(&labels) - Model::energy(&s, &labels)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extrapolation_recovers_exact_ansatz() {
        let pts: Vec<GroundStateEstimate> = [64usize, 128, 256]
            .iter()
            .map(|&n| GroundStateEstimate { n, p: 2, mean: 0.76 - 0.4 * (n as f64).powf(-2.0 / 3.0), sem: 0.01, values: vec![] })
            .collect();
        let e = extrapolate(&pts).unwrap();
        assert!((e.limit - 0.76).abs() < 1e-12 && (e.slope + 0.4).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(pspin_ground_state(1, 2, &SolverChoice::Exact, 4, &mut stream(0, 0)).is_err());
        assert!(pspin_ground_state(4, 2, &SolverChoice::Exact, 1, &mut stream(0, 0)).is_err());
    }
}
