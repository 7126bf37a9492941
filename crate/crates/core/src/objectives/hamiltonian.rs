use super::kernel::Kernel;
use super::spin::SpinConfig;
use super::weights::WeightTensor;
use crate::combinatorics::factorial;
use crate::ensembles::PUniformHypergraph;
use crate::error::{Error, Result};

fn check_dims(weights: &WeightTensor, kernel: &Kernel, sigma: &SpinConfig) -> Result<()> {
    if weights.p() != kernel.p() {
        return Err(Error::DimensionMismatch(format!("weights arity {} vs kernel arity {}", weights.p(), kernel.p())));
    }
    if sigma.len() != weights.n() {
        return Err(Error::DimensionMismatch(format!("configuration length {} vs n={}", sigma.len(), weights.n())));
    }
    if sigma.q() != kernel.q() {
        return Err(Error::DimensionMismatch(format!("configuration alphabet {} vs kernel alphabet {}", sigma.q(), kernel.q())));
    }
    Ok(())
}

/// H(sigma) = sum over ordered tuples of A f(sigma), evaluated as p! times
/// the sum over stored sorted tuples.
pub fn hamiltonian(weights: &WeightTensor, kernel: &Kernel, sigma: &SpinConfig) -> Result<f64> {
    check_dims(weights, kernel, sigma)?;
    let s = sigma.labels();
    let pf = factorial(kernel.p() as u64) as f64;
    let mut args = vec![0u8; kernel.p()];
    let mut total = 0.0;
    for (t, w) in weights.iter() {
        for (a, &v) in args.iter_mut().zip(t) {
            *a = s[v as usize];
        }
        total += pf * w * kernel.eval(&args);
    }
    if let Some((t, w)) = weights.short() {
        let short: Vec<u8> = t.iter().map(|&v| s[v as usize]).collect();
        if let Some(f) = kernel.eval_short(&short) {
            total += pf * w * f;
        }
    }
    Ok(total)
}

/// Number of edges (with multiplicity) whose endpoints get different labels.
pub fn qcut_value(g: &PUniformHypergraph, q: usize, sigma: &SpinConfig) -> Result<usize> {
    if g.p() != 2 {
        return Err(Error::DimensionMismatch(format!("cut needs a graph, got arity {}", g.p())));
    }
    if sigma.len() != g.n() || sigma.q() != q {
        return Err(Error::DimensionMismatch("configuration does not match graph".into()));
    }
    let s = sigma.labels();
    Ok(g.edges().filter(|(t, _)| s[t[0] as usize] != s[t[1] as usize]).map(|(_, m)| m as usize).sum())
}

/// Cut size of a balanced bisection.
pub fn bisection_cut(g: &PUniformHypergraph, sigma: &SpinConfig) -> Result<usize> {
    if sigma.q() != 2 || !sigma.is_balanced() {
        return Err(Error::Unbalanced(sigma.counts()));
    }
    qcut_value(g, 2, sigma)
}
