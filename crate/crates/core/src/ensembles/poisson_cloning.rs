use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::configuration::random_groups;
use super::PUniformHypergraph;
use crate::combinatorics::{binomial, factorial};
use crate::error::{invalid, Result};

/// Mean clone count per vertex: `(p-1)! d / n^(p-1) * C(n-1, p-1)`.
pub fn cloning_mean(n: usize, p: usize, d: f64) -> f64 {
    factorial(p as u64 - 1) as f64 * d / (n as f64).powi(p as i32 - 1)
        * binomial(n as u64 - 1, p as u64 - 1) as f64
}

/// Poisson cloning hypergraph plus the clone counts `U_i`.
#[derive(Debug, Clone)]
pub struct PoissonCloningSample {
    pub graph: PUniformHypergraph,
    pub clone_counts: Vec<usize>,
}

/// Poisson cloning model: `U_i ~ Pois(mean)` clones per vertex, matched
/// uniformly into p-edges; `sum U_i mod p` leftovers form one short edge.
pub fn gen_poisson_cloning<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: f64,
    rng: &mut R,
) -> Result<PoissonCloningSample> {
    if p < 2 || p > n {
        return Err(invalid(format!("need 2 <= p <= n, got p={p}, n={n}")));
    }
    if !(d >= 0.0) || !d.is_finite() {
        return Err(invalid(format!("average degree d={d} must be finite and non-negative")));
    }
    let mean = cloning_mean(n, p, d);
    let clone_counts: Vec<usize> = if mean > 0.0 {
        let pois = Poisson::new(mean).map_err(|e| invalid(e.to_string()))?;
        (0..n).map(|_| pois.sample(rng) as usize).collect()
    } else {
        vec![0; n]
    };
    let clones: Vec<u32> = clone_counts
        .iter()
        .enumerate()
        .flat_map(|(v, &u)| std::iter::repeat_n(v as u32, u))
        .collect();
    let (groups, rest) = random_groups(clones, p, rng);
    let mut graph = PUniformHypergraph::new(n, p, true)?;
    for mut e in groups {
        e.sort_unstable();
        graph.add_edge_unchecked(e);
    }
    graph.set_short_edge(rest);
    Ok(PoissonCloningSample { graph, clone_counts })
}
