use std::collections::BTreeMap;

use crate::combinatorics::{factorial, has_repeat};
use crate::ensembles::PUniformHypergraph;
use crate::error::{invalid, Error, Result};

/// Sparse symmetric array of weights indexed by sorted p-tuples.
///
/// A stored entry `w` at sorted tuple `t` stands for the symmetric extension:
/// every ordering of `t` carries weight `w`. Repeated indices are accepted only
/// when the tensor is built with `allow_repeats` (multigraph adjacency).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTensor {
    n: usize,
    p: usize,
    allow_repeats: bool,
    entries: BTreeMap<Vec<u32>, f64>,
    short: Option<(Vec<u32>, f64)>,
}

impl WeightTensor {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p < 2 {
            return Err(invalid(format!("arity p={p} must be at least 2")));
        }
        if n < p {
            return Err(invalid(format!("n={n} smaller than arity p={p}")));
        }
        Ok(Self { n, p, allow_repeats: false, entries: BTreeMap::new(), short: None })
    }

    pub fn with_repeats(n: usize, p: usize) -> Result<Self> {
        let mut w = Self::new(n, p)?;
        w.allow_repeats = true;
        Ok(w)
    }

    /// Adjacency tensor of a hypergraph: multiplicity / (p-1)! per edge, so
    /// that the ordered-tuple sum counts each copy of an edge p times.
    pub fn adjacency(g: &PUniformHypergraph) -> Result<Self> {
        let mut w = if g.is_multi() { Self::with_repeats(g.n(), g.p())? } else { Self::new(g.n(), g.p())? };
        let unit = 1.0 / factorial(g.p() as u64 - 1) as f64;
        for (t, m) in g.edges() {
            w.add(t, m as f64 * unit)?;
        }
        if let Some(s) = g.short_edge() {
            w.short = Some((s.to_vec(), unit));
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn allows_repeats(&self) -> bool {
        self.allow_repeats
    }

    fn check(&self, tuple: &[u32]) -> Result<Vec<u32>> {
        if tuple.len() != self.p {
            return Err(Error::DimensionMismatch(format!("tuple {tuple:?} has arity != {}", self.p)));
        }
        let mut t = tuple.to_vec();
        t.sort_unstable();
        if t.iter().any(|&v| v as usize >= self.n) {
            return Err(Error::DimensionMismatch(format!("tuple {tuple:?} out of range for n={}", self.n)));
        }
        if !self.allow_repeats && has_repeat(&t) {
            return Err(invalid(format!("tuple {tuple:?} has repeated indices")));
        }
        Ok(t)
    }

    /// Overwrites the entry at `tuple` (any order).
    pub fn set(&mut self, tuple: &[u32], w: f64) -> Result<()> {
        let t = self.check(tuple)?;
        self.entries.insert(t, w);
        Ok(())
    }

    /// Adds `w` to the entry at `tuple` (any order).
    pub fn add(&mut self, tuple: &[u32], w: f64) -> Result<()> {
        let t = self.check(tuple)?;
        *self.entries.entry(t).or_insert(0.0) += w;
        Ok(())
    }

    pub fn get(&self, tuple: &[u32]) -> f64 {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.entries.get(&t).copied().unwrap_or(0.0)
    }

    /// Weighted edge with fewer than p vertices.
    pub fn set_short(&mut self, tuple: &[u32], w: f64) -> Result<()> {
        if tuple.is_empty() || tuple.len() >= self.p || tuple.iter().any(|&v| v as usize >= self.n) {
            return Err(invalid(format!("invalid short edge {tuple:?}")));
        }
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.short = Some((t, w));
        Ok(())
    }

    pub fn short(&self) -> Option<(&[u32], f64)> {
        self.short.as_ref().map(|(t, w)| (t.as_slice(), *w))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.entries.iter().map(|(t, &w)| (t.as_slice(), w))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest absolute stored weight.
    pub fn max_abs(&self) -> f64 {
        let s = self.short.as_ref().map_or(0.0, |(_, w)| w.abs());
        self.entries.values().fold(s, |m, w| m.max(w.abs()))
    }

    pub fn scale(&mut self, c: f64) {
        for w in self.entries.values_mut() {
            *w *= c;
        }
        if let Some((_, w)) = self.short.as_mut() {
            *w *= c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_symmetric() {
        let mut w = WeightTensor::new(5, 3).unwrap();
        w.set(&[3, 0, 1], 2.5).unwrap();
        assert_eq!(w.get(&[1, 3, 0]), 2.5);
        assert_eq!(w.get(&[0, 1, 2]), 0.0);
        assert!(w.set(&[0, 0, 1], 1.0).is_err());
        assert!(w.set(&[0, 5, 1], 1.0).is_err());
        assert!(w.set(&[0, 1], 1.0).is_err());
        assert_eq!(w.max_abs(), 2.5);
    }

    #[test]
    fn adjacency_weights() {
        let mut g = PUniformHypergraph::new(4, 3, true).unwrap();
        g.add_edge(&[0, 1, 2]).unwrap();
        g.add_edge(&[0, 1, 2]).unwrap();
        g.add_edge(&[3, 3, 1]).unwrap();
        let w = WeightTensor::adjacency(&g).unwrap();
        assert_eq!(w.get(&[2, 1, 0]), 1.0);
        assert_eq!(w.get(&[1, 3, 3]), 0.5);
    }
}
