use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::PUniformHypergraph;
use crate::error::{invalid, Error, Result};

/// Shuffles `items` and cuts them into consecutive groups of `p`; a trailing
/// group of fewer than `p` items is returned separately.
pub(crate) fn random_groups<T: Copy, R: Rng + ?Sized>(
    mut items: Vec<T>,
    p: usize,
    rng: &mut R,
) -> (Vec<Vec<T>>, Vec<T>) {
    items.shuffle(rng);
    let full = items.len() / p * p;
    let rest = items[full..].to_vec();
    let groups = items[..full].chunks(p).map(|c| c.to_vec()).collect();
    (groups, rest)
}

fn sorted_vertices(clones: &[(u32, u32)]) -> Vec<u32> {
    let mut t: Vec<u32> = clones.iter().map(|c| c.0).collect();
    t.sort_unstable();
    t
}

/// d-regular p-uniform multi-hypergraph from the configuration model: a
/// uniform random matching of the `n d` vertex clones into `n d / p` edges.
pub fn gen_configuration_regular<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: usize,
    rng: &mut R,
) -> Result<PUniformHypergraph> {
    if p < 2 {
        return Err(invalid(format!("edge arity p={p} must be at least 2")));
    }
    if !(n * d).is_multiple_of(p) {
        return Err(Error::Divisibility { required: p, value: n * d });
    }
    let clones: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let (groups, rest) = random_groups(clones, p, rng);
    debug_assert!(rest.is_empty());
    let mut g = PUniformHypergraph::new(n, p, true)?;
    for mut e in groups {
        e.sort_unstable();
        g.add_edge_unchecked(e);
    }
    Ok(g)
}

/// Partition of `m_red` RED balls into groups of `p` by the two-step
/// procedure: group all `m_red + n_blue` balls at random, keep the all-RED
/// groups, then regroup the RED balls freed by dropping BLUE ones.
///
/// RED balls are `0..m_red`. Groups come back sorted, in sorted order.
pub fn two_stage_partition<R: Rng + ?Sized>(
    m_red: usize,
    n_blue: usize,
    p: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    if p == 0 {
        return Err(invalid("group size must be positive"));
    }
    if !m_red.is_multiple_of(p) {
        return Err(Error::Divisibility { required: p, value: m_red });
    }
    if !(m_red + n_blue).is_multiple_of(p) {
        return Err(Error::Divisibility { required: p, value: m_red + n_blue });
    }
    let balls: Vec<usize> = (0..m_red + n_blue).collect();
    let (first, _) = random_groups(balls, p, rng);
    let mut partition = Vec::with_capacity(m_red / p);
    let mut freed = Vec::new();
    for g in first {
        if g.iter().all(|&b| b < m_red) {
            partition.push(g);
        } else {
            freed.extend(g.into_iter().filter(|&b| b < m_red));
        }
    }
    let (second, rest) = random_groups(freed, p, rng);
    debug_assert!(rest.is_empty());
    partition.extend(second);
    for g in partition.iter_mut() {
        g.sort_unstable();
    }
    partition.sort();
    Ok(partition)
}

/// Output of the two-stage construction of the configuration model.
#[derive(Debug, Clone)]
pub struct TwoStageSample {
    /// Configuration-model sample.
    pub g1: PUniformHypergraph,
    /// `G_R` together with the rematched RED clones.
    pub g2: PUniformHypergraph,
    /// Edges of `g1` holding at least one BLUE clone.
    pub g_blue: PUniformHypergraph,
    /// Edges of `g1` made only of RED clones.
    pub g_red: PUniformHypergraph,
    /// Edges built by rematching the freed RED clones.
    pub g_red_new: PUniformHypergraph,
    /// Number of BLUE clones per vertex.
    pub z: Vec<usize>,
    /// Poisson mean used for the X_i.
    pub poisson_mean: f64,
}

/// Two-stage construction: `X_i ~ Pois(d - C sqrt(d) ln d)`, the first
/// `Z_i = (d - X_i)+` clones of vertex i are BLUE, the rest RED.
pub fn gen_two_stage_regular<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    d: usize,
    c: f64,
    rng: &mut R,
) -> Result<TwoStageSample> {
    if !(c > 0.0) {
        return Err(invalid(format!("constant C={c} must be positive")));
    }
    if !(n * d).is_multiple_of(p) {
        return Err(Error::Divisibility { required: p, value: n * d });
    }
    let df = d as f64;
    let mean = df - c * df.sqrt() * df.max(1.0).ln();
    if mean < 0.0 {
        return Err(invalid(format!("Poisson mean d - C sqrt(d) ln d = {mean} is negative")));
    }
    let z: Vec<usize> = if mean > 0.0 {
        let pois = Poisson::new(mean).map_err(|e| invalid(e.to_string()))?;
        (0..n).map(|_| d.saturating_sub(pois.sample(rng) as usize)).collect()
    } else {
        vec![d; n]
    };
    // clone = (vertex, slot); slot < z[v] is BLUE
    let clones: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|v| (0..d as u32).map(move |j| (v, j)))
        .collect();
    let is_blue = |c: &(u32, u32)| (c.1 as usize) < z[c.0 as usize];
    let (groups, _) = random_groups(clones, p, rng);

    let mut g1 = PUniformHypergraph::new(n, p, true)?;
    let mut g_red = PUniformHypergraph::new(n, p, true)?;
    let mut g_blue = PUniformHypergraph::new(n, p, true)?;
    let mut freed = Vec::new();
    for grp in &groups {
        let t = sorted_vertices(grp);
        g1.add_edge_unchecked(t.clone());
        if grp.iter().any(is_blue) {
            g_blue.add_edge_unchecked(t);
            freed.extend(grp.iter().filter(|c| !is_blue(c)).copied());
        } else {
            g_red.add_edge_unchecked(t);
        }
    }
    let (regroup, rest) = random_groups(freed, p, rng);
    let mut g_red_new = PUniformHypergraph::new(n, p, true)?;
    let mut g2 = g_red.clone();
    for grp in &regroup {
        let t = sorted_vertices(grp);
        g_red_new.add_edge_unchecked(t.clone());
        g2.add_edge_unchecked(t);
    }
    if !rest.is_empty() {
        g_red_new.set_short_edge(sorted_vertices(&rest));
        g2.set_short_edge(sorted_vertices(&rest));
    }
    Ok(TwoStageSample { g1, g2, g_blue, g_red, g_red_new, z, poisson_mean: mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn forced_configurations() {
        let g = gen_configuration_regular(3, 3, 1, &mut stream(1, 0)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(&[0u32, 1, 2][..], 1)]);
        let g = gen_configuration_regular(6, 3, 2, &mut stream(2, 0)).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degrees(), vec![2; 6]);
    }

    #[test]
    fn divisibility_is_enforced() {
        assert!(matches!(
            gen_configuration_regular(5, 3, 1, &mut stream(1, 0)),
            Err(Error::Divisibility { .. })
        ));
        assert!(two_stage_partition(4, 1, 2, &mut stream(1, 0)).is_err());
        assert!(two_stage_partition(3, 1, 2, &mut stream(1, 0)).is_err());
    }

    #[test]
    fn single_group_of_red() {
        for s in 0..20 {
            let part = two_stage_partition(3, 6, 3, &mut stream(s, 0)).unwrap();
            assert_eq!(part, vec![vec![0, 1, 2]]);
        }
    }

    #[test]
    fn two_stage_accounting() {
        for s in 0..20 {
            let t = gen_two_stage_regular(12, 2, 4, 0.5, &mut stream(s, 1)).unwrap();
            assert_eq!(t.g1.degrees(), vec![4; 12]);
            let red: usize = t.z.iter().map(|&z| 4 - z).sum();
            assert_eq!(t.g2.degrees().iter().sum::<usize>(), red);
            assert_eq!(t.g1.edge_count(), t.g_red.edge_count() + t.g_blue.edge_count());
            for (v, deg) in t.g2.degrees().into_iter().enumerate() {
                assert_eq!(deg, 4 - t.z[v]);
            }
        }
    }

    #[test]
    fn two_stage_rejects_negative_mean() {
        assert!(gen_two_stage_regular(10, 2, 4, 5.0, &mut stream(1, 0)).is_err());
    }
}
