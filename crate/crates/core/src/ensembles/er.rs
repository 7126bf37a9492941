use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use super::PUniformHypergraph;
use crate::combinatorics::{binomial, factorial, for_each_subset, random_subset};
use crate::error::{invalid, Result};

/// Largest n for which ER sampling enumerates every p-subset.
pub const ENUMERATION_MAX_N: usize = 64;

/// Edge probability `d (p-1)! / n^(p-1)`, before and after clamping to 1.
pub fn er_edge_probability(n: usize, p: usize, d: f64) -> (f64, f64) {
    let raw = d * factorial(p as u64 - 1) as f64 / (n as f64).powi(p as i32 - 1);
    (raw, raw.min(1.0))
}

fn validate(n: usize, p: usize, d: f64) -> Result<()> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(invalid(format!("average degree d={d} must be finite and non-negative")));
    }
    if p < 2 {
        return Err(invalid(format!("edge arity p={p} must be at least 2")));
    }
    if p > n {
        return Err(invalid(format!("edge arity p={p} exceeds n={n}")));
    }
    Ok(())
}

/// Erdos-Renyi p-uniform hypergraph: every p-subset is an edge independently
/// with probability `min(1, d (p-1)! / n^(p-1))`.
pub fn gen_er_hypergraph<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: f64,
    rng: &mut R,
) -> Result<PUniformHypergraph> {
    validate(n, p, d)?;
    let (raw, prob) = er_edge_probability(n, p, d);
    if raw > 1.0 {
        log::info!("ER edge probability {raw:.4} clamped to 1 (n={n}, p={p}, d={d})");
    }
    let mut g = PUniformHypergraph::new(n, p, false)?;
    if prob <= 0.0 {
        return Ok(g);
    }
    if n <= ENUMERATION_MAX_N || prob > 0.25 {
        for_each_subset(n, p, |t| {
            if prob >= 1.0 || rng.random::<f64>() < prob {
                g.add_edge_unchecked(t.to_vec());
            }
        });
        return Ok(g);
    }
    let subsets = binomial(n as u64, p as u64);
    let count = Binomial::new(subsets as u64, prob)
        .map_err(|e| invalid(e.to_string()))?
        .sample(rng);
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(count as usize);
    while seen.len() < count as usize {
        seen.insert(random_subset(n, p, rng));
    }
    for t in seen {
        g.add_edge_unchecked(t);
    }
    Ok(g)
}

/// ER multi-hypergraph: the multiplicity of every p-subset is an independent
/// Poisson variable with mean `d (p-1)! / n^(p-1)` (never clamped).
///
/// First and second moments of the resulting adjacency weights match the
/// Gaussian surrogate exactly for every `d`, including `d > n`.
pub fn gen_er_multigraph<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: f64,
    rng: &mut R,
) -> Result<PUniformHypergraph> {
    validate(n, p, d)?;
    let (lambda, _) = er_edge_probability(n, p, d);
    let mut g = PUniformHypergraph::new(n, p, true)?;
    if lambda <= 0.0 {
        return Ok(g);
    }
    // Poissonization: a Poisson total spread uniformly over subsets gives
    // independent Poisson multiplicities.
    let subsets = binomial(n as u64, p as u64) as f64;
    let total = Poisson::new(lambda * subsets)
        .map_err(|e| invalid(e.to_string()))?
        .sample(rng) as usize;
    for _ in 0..total {
        g.add_edge_unchecked(random_subset(n, p, rng));
    }
    Ok(g)
}

/// Which ER variant an experiment draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErVariant {
    /// Independent Bernoulli edges (the classical ensemble, clamped at 1).
    Bernoulli,
    /// Independent Poisson multiplicities.
    #[default]
    Poisson,
}

pub fn gen_er<R: Rng + ?Sized>(
    variant: ErVariant,
    n: usize,
    p: usize,
    d: f64,
    rng: &mut R,
) -> Result<PUniformHypergraph> {
    match variant {
        ErVariant::Bernoulli => gen_er_hypergraph(n, p, d, rng),
        ErVariant::Poisson => gen_er_multigraph(n, p, d, rng),
    }
}
