//! Lindeberg-style comparison of the log-partition function on sparse
//! Poisson disorder against its moment-matched Gaussian counterpart.

use rand::Rng;
use statrs::distribution::{ContinuousCDF, DiscreteCDF, Normal, Poisson};

use crate::combinatorics::{factorial, for_each_subset};
use crate::error::{invalid, Result};
use crate::objectives::{Kernel, WeightTensor};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::{log_partition_model, ConstraintSet, Model};
use crate::stats::mean_sem;

/// Replica averages of Phi_1 (sparse) and Phi_2 (Gaussian).
///
/// `gap_over_beta` estimates |E Phi_1 - E Phi_2| / beta from paired
/// differences; `mean_abs_gap_over_beta` is the replica average of
/// |Phi_1 - Phi_2| / beta under the coupling, an upper bound on the former
/// with much lower relative noise.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GapEstimate {
    pub phi1_mean: f64,
    pub phi1_sem: f64,
    pub phi2_mean: f64,
    pub phi2_sem: f64,
    pub gap_over_beta: f64,
    pub gap_sem: f64,
    pub mean_abs_gap_over_beta: f64,
    pub mean_abs_gap_sem: f64,
}

/// One pair of coupled disorder draws: per distinct p-subset a shared
/// uniform U gives the Poisson multiplicity F^-1(U) and the Gaussian
/// entry through the normal quantile of U.
pub(crate) fn coupled_weights<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: f64,
    rng: &mut R,
) -> Result<(WeightTensor, WeightTensor)> {
    let pf1 = factorial(p as u64 - 1) as f64;
    let npow = (n as f64).powi(p as i32 - 1);
    let lambda = d * pf1 / npow;
    let pois = Poisson::new(lambda).map_err(|e| invalid(e.to_string()))?;
    let sd = (1.0 / pf1).sqrt() / npow.sqrt();
    let normal = Normal::new(d.sqrt() / npow, sd).map_err(|e| invalid(e.to_string()))?;
    let mut sparse = WeightTensor::new(n, p)?;
    let mut gauss = WeightTensor::new(n, p)?;
    let unit = 1.0 / (pf1 * d.sqrt());
    let mut err = Ok(());
    for_each_subset(n, p, |t| {
        // open interval keeps both quantiles finite
        let u: f64 = rng.random_range(f64::EPSILON..1.0);
        let mult = pois.inverse_cdf(u);
        let r = (|| {
            if mult > 0 {
                sparse.set(t, mult as f64 * unit)?;
            }
            gauss.set(t, normal.inverse_cdf(u))
        })();
        if err.is_ok() {
            err = r;
        }
    });
    err.map(|_| (sparse, gauss))
}

pub fn interpolation_gap<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: f64,
    beta: f64,
    kernel: &Kernel,
    replicas: usize,
    rng: &mut R,
) -> Result<GapEstimate> {
    if kernel.p() != p {
        return Err(invalid(format!("kernel arity {} differs from p={p}", kernel.p())));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(invalid(format!("average degree d={d} must be positive")));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(format!("inverse temperature beta={beta} must be finite and non-negative")));
    }
    if replicas < 2 {
        return Err(invalid("need at least two replicas"));
    }
    let seed = rng.next_u64();
    let pairs = map_indices(replicas, |r| -> Result<(f64, f64)> {
        let mut rng = stream(seed, r as u64);
        let (w1, w2) = coupled_weights(n, p, d, &mut rng)?;
        let phi1 = log_partition_model(&Model::new(&w1, kernel)?, &ConstraintSet::All, beta)?.phi;
        let phi2 = log_partition_model(&Model::new(&w2, kernel)?, &ConstraintSet::All, beta)?.phi;
        Ok((phi1, phi2))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let phi1 = mean_sem(&pairs.iter().map(|x| x.0).collect::<Vec<_>>());
    let phi2 = mean_sem(&pairs.iter().map(|x| x.1).collect::<Vec<_>>());
    let (gap, gap_sem, abs_gap, abs_sem) = if beta == 0.0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let diff = mean_sem(&pairs.iter().map(|x| x.0 - x.1).collect::<Vec<_>>());
        let abs = mean_sem(&pairs.iter().map(|x| (x.0 - x.1).abs()).collect::<Vec<_>>());
        (diff.mean.abs() / beta, diff.sem / beta, abs.mean / beta, abs.sem / beta)
    };
    Ok(GapEstimate {
        phi1_mean: phi1.mean,
        phi1_sem: phi1.sem,
        phi2_mean: phi2.mean,
        phi2_sem: phi2.sem,
        gap_over_beta: gap,
        gap_sem,
        mean_abs_gap_over_beta: abs_gap,
        mean_abs_gap_sem: abs_sem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupled_moments_match() {
        // E[A] and E[A^2] of the sparse entry agree with the Gaussian entry
        let (n, p, d) = (6usize, 2usize, 9.0);
        let mut rng = stream(3, 0);
        let (mut s1, mut s2, mut g1, mut g2, mut k) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..4000 {
            let (a, b) = coupled_weights(n, p, d, &mut rng).unwrap();
            for_each_subset(n, p, |t| {
                let (x, y) = (a.get(t), b.get(t));
                s1 += x;
                s2 += x * x;
                g1 += y;
                g2 += y * y;
                k += 1.0;
            });
        }
        let (m1, m2) = (d.sqrt() / n as f64, 1.0 / n as f64 + d / (n * n) as f64);
        assert!((s1 / k - m1).abs() < 0.02 * m1, "{} vs {m1}", s1 / k);
        assert!((g1 / k - m1).abs() < 0.02 * m1);
        assert!((s2 / k - m2).abs() < 0.03 * m2, "{} vs {m2}", s2 / k);
        assert!((g2 / k - m2).abs() < 0.03 * m2);
    }

    #[test]
    fn zero_temperature_gap_vanishes() {
        let k = Kernel::cut(2, 2).unwrap();
        let g = interpolation_gap(6, 2, 4.0, 0.0, &k, 4, &mut stream(1, 0)).unwrap();
        assert_eq!((g.gap_over_beta, g.mean_abs_gap_over_beta), (0.0, 0.0));
        assert_eq!(g.phi1_mean, g.phi2_mean);
        assert!((g.phi1_mean - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_kernel() {
        let k = Kernel::cut(3, 2).unwrap();
        assert!(interpolation_gap(6, 2, 4.0, 1.0, &k, 4, &mut stream(1, 0)).is_err());
    }
}
