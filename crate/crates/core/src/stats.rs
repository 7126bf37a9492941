//! Small statistics toolkit: sample moments, least-squares fits and
//! goodness-of-fit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeanSem {
    pub mean: f64,
    pub sem: f64,
    /// Unbiased sample variance.
    pub var: f64,
    pub count: usize,
}

/// Sample mean, unbiased variance and standard error (Welford).
pub fn mean_sem(xs: &[f64]) -> MeanSem {
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &x) in xs.iter().enumerate() {
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    let count = xs.len();
    let var = if count > 1 { m2 / (count - 1) as f64 } else { f64::NAN };
    MeanSem { mean, sem: (var / count as f64).sqrt(), var, count }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub intercept_se: f64,
    pub slope_se: f64,
}

/// Weighted least squares for y = a + b x with weights 1/sigma^2. With
/// `sigma = None` it is ordinary least squares and the standard errors use the
/// residual variance.
pub fn line_fit(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 || sigma.is_some_and(|s| s.len() != x.len()) {
        return Err(invalid("line fit needs at least two matched points"));
    }
    let w: Vec<f64> = match sigma {
        Some(s) => s.iter().map(|v| 1.0 / (v * v)).collect(),
        None => vec![1.0; x.len()],
    };
    if w.iter().any(|v| !v.is_finite()) {
        return Err(invalid("line fit weights must be finite"));
    }
    let sw: f64 = w.iter().sum();
    let sx: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum();
    let sy: f64 = w.iter().zip(y).map(|(w, y)| w * y).sum();
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = w.iter().zip(x).zip(y).map(|((w, x), y)| w * x * y).sum();
    let det = sw * sxx - sx * sx;
    if det.abs() <= f64::EPSILON * sw * sxx {
        return Err(invalid("line fit abscissae are degenerate"));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let scale = if sigma.is_some() {
        1.0
    } else if x.len() > 2 {
        let rss: f64 = x.iter().zip(y).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        rss / (x.len() - 2) as f64
    } else {
        0.0
    };
    Ok(LineFit {
        intercept,
        slope,
        intercept_se: (scale * sxx / det).sqrt(),
        slope_se: (scale * sw / det).sqrt(),
    })
}

/// Pearson chi-square test of equal cell probabilities. Returns (statistic, p-value).
pub fn chi_square_uniform(counts: &[u64]) -> Result<(f64, f64)> {
    if counts.len() < 2 {
        return Err(invalid("chi-square test needs at least two cells"));
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).map_err(|e| invalid(e.to_string()))?;
    Ok((stat, dist.sf(stat)))
}

/// One-sided F-test of H1: var_b < var_a from sample variances with `dfa`,
/// `dfb` degrees of freedom. Returns (F = var_a / var_b, p-value).
pub fn f_test_greater(var_a: f64, dfa: usize, var_b: f64, dfb: usize) -> Result<(f64, f64)> {
    if dfa == 0 || dfb == 0 || !(var_b > 0.0) {
        return Err(invalid("F-test needs positive degrees of freedom and a positive denominator"));
    }
    let f = var_a / var_b;
    let dist = FisherSnedecor::new(dfa as f64, dfb as f64).map_err(|e| invalid(e.to_string()))?;
    Ok((f, dist.sf(f)))
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("KS test needs non-empty samples"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok((d, kolmogorov_sf(lambda)))
}

/// P(K > lambda) for the Kolmogorov distribution.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}
