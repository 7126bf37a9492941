use rand::Rng;

use super::problem::Problem;
use crate::ensembles::ErVariant;
use crate::error::{invalid, Result};
use crate::par::map_indices;
use crate::rng::stream;
use crate::solvers::SolverChoice;
use crate::stats::{f_test_greater, line_fit, mean_sem};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VarianceRow {
    pub n: usize,
    pub mean: f64,
    pub var: f64,
}

/// One-sided F-test that the variance at `n_large` is below that at `n_small`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FTest {
    pub n_small: usize,
    pub n_large: usize,
    pub f: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConcentrationScan {
    pub rows: Vec<VarianceRow>,
    /// Least-squares slope of log var against log n; absent when some
    /// variance is zero.
    pub slope: Option<f64>,
    pub slope_se: Option<f64>,
    pub f_test: Option<FTest>,
}

/// Sample variance of V_n = max / n across disorder replicas for each n.
pub fn concentration_scan<R: Rng + ?Sized>(
    problem: Problem,
    n_grid: &[usize],
    d: f64,
    variant: ErVariant,
    solver: &SolverChoice,
    replicas: usize,
    rng: &mut R,
) -> Result<ConcentrationScan> {
    problem.validate()?;
    if replicas < 2 {
        return Err(invalid("need at least two replicas for a variance"));
    }
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let seed = rng.next_u64();
        let values = map_indices(replicas, |r| problem.sample_value(n, d, variant, solver, &mut stream(seed, r as u64)))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        let s = mean_sem(&values);
        rows.push(VarianceRow { n, mean: s.mean, var: s.var });
    }
    let (mut slope, mut slope_se) = (None, None);
    if rows.len() >= 2 && rows.iter().all(|r| r.var > 0.0) {
        let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.var.ln()).collect();
        let fit = line_fit(&x, &y, None)?;
        slope = Some(fit.slope);
        slope_se = Some(fit.slope_se);
    }
    let f_test = match (rows.iter().min_by_key(|r| r.n), rows.iter().max_by_key(|r| r.n)) {
        (Some(a), Some(b)) if a.n != b.n && b.var > 0.0 => {
            let (f, p_value) = f_test_greater(a.var, replicas - 1, b.var, replicas - 1)?;
            Some(FTest { n_small: a.n, n_large: b.n, f, p_value })
        }
        _ => None,
    };
    Ok(ConcentrationScan { rows, slope, slope_se, f_test })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_instance_has_zero_variance() {
        // Bernoulli ER with d >= n is the complete graph
        let s = concentration_scan(
            Problem::Qcut { q: 2 },
            &[6, 8],
            100.0,
            ErVariant::Bernoulli,
            &SolverChoice::Exact,
            4,
            &mut stream(1, 0),
        )
        .unwrap();
        assert!(s.rows.iter().all(|r| r.var == 0.0));
        assert_eq!(s.rows[0].mean, 9.0 / 6.0);
        assert!(s.slope.is_none() && s.f_test.is_none());
    }
}
