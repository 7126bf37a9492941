use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};

/// A p-uniform (multi-)hypergraph on vertices `0..n`.
///
/// Edges are sorted tuples keyed with a multiplicity. Simple ensembles have
/// distinct vertices in every tuple and multiplicity one; configuration-model
/// and cloning outputs set `multi` and may repeat both. A single trailing
/// short edge (fewer than `p` vertices) is allowed in `multi` graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PUniformHypergraph {
    n: usize,
    p: usize,
    multi: bool,
    edges: BTreeMap<Vec<u32>, u32>,
    short_edge: Option<Vec<u32>>,
}

impl PUniformHypergraph {
    pub fn new(n: usize, p: usize, multi: bool) -> Result<Self> {
        if p < 2 {
            return Err(invalid(format!("edge arity p={p} must be at least 2")));
        }
        Ok(Self { n, p, multi, edges: BTreeMap::new(), short_edge: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_multi(&self) -> bool {
        self.multi
    }

    /// Adds one copy of an edge. The tuple need not be sorted.
    pub fn add_edge(&mut self, tuple: &[u32]) -> Result<()> {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        if let Some(&v) = t.iter().find(|&&v| v as usize >= self.n) {
            return Err(invalid(format!("vertex {v} out of range for n={}", self.n)));
        }
        if t.len() != self.p {
            if self.multi && t.len() < self.p && !t.is_empty() && self.short_edge.is_none() {
                self.short_edge = Some(t);
                return Ok(());
            }
            return Err(invalid(format!("edge {t:?} does not have arity {}", self.p)));
        }
        if !self.multi && crate::combinatorics::has_repeat(&t) {
            return Err(invalid(format!("edge {t:?} repeats a vertex in a simple hypergraph")));
        }
        let entry = self.edges.entry(t).or_insert(0);
        if !self.multi && *entry > 0 {
            return Err(invalid("repeated edge in a simple hypergraph"));
        }
        *entry += 1;
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, sorted: Vec<u32>) {
        *self.edges.entry(sorted).or_insert(0) += 1;
    }

    pub(crate) fn set_short_edge(&mut self, mut t: Vec<u32>) {
        t.sort_unstable();
        if !t.is_empty() {
            self.short_edge = Some(t);
        }
    }

    /// Distinct tuples with their multiplicities, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.edges.iter().map(|(k, &m)| (k.as_slice(), m))
    }

    /// Every full edge, repeated by multiplicity.
    pub fn edge_list(&self) -> impl Iterator<Item = &[u32]> {
        self.edges
            .iter()
            .flat_map(|(k, &m)| std::iter::repeat_n(k.as_slice(), m as usize))
    }

    pub fn short_edge(&self) -> Option<&[u32]> {
        self.short_edge.as_deref()
    }

    /// Number of full p-edges, counting multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    pub fn multiplicity(&self, tuple: &[u32]) -> u32 {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.edges.get(&t).copied().unwrap_or(0)
    }

    /// Number of edge slots (including the short edge) occupied by each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for (t, m) in self.edges() {
            for &v in t {
                deg[v as usize] += m as usize;
            }
        }
        if let Some(s) = &self.short_edge {
            for &v in s {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Whether every tuple has distinct vertices and multiplicity one.
    pub fn is_simple(&self) -> bool {
        self.short_edge.is_none()
            && self
                .edges
                .iter()
                .all(|(t, &m)| m == 1 && !crate::combinatorics::has_repeat(t))
    }

    /// Canonical text form: `p n m multi`, then one edge per line.
    pub fn to_text(&self) -> String {
        let m = self.edge_count() + usize::from(self.short_edge.is_some());
        let mut out = String::new();
        writeln!(out, "{} {} {} {}", self.p, self.n, m, u8::from(self.multi)).unwrap();
        for t in self.edge_list() {
            write_tuple(&mut out, t);
        }
        if let Some(s) = &self.short_edge {
            write_tuple(&mut out, s);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let h = parse_numbers(header, 1)?;
        if h.len() != 4 {
            return Err(Error::Parse { line: 1, msg: "header must be `p n m multi`".into() });
        }
        let (p, n, m, multi) = (h[0] as usize, h[1] as usize, h[2] as usize, h[3] != 0);
        let mut g = Self::new(n, p, multi)?;
        for _ in 0..m {
            let (ln, line) = lines
                .next()
                .ok_or(Error::Parse { line: 0, msg: format!("expected {m} edges") })?;
            let t: Vec<u32> = parse_numbers(line, ln + 1)?.into_iter().map(|x| x as u32).collect();
            g.add_edge(&t).map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() })?;
        }
        Ok(g)
    }
}

fn write_tuple(out: &mut String, t: &[u32]) {
    let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

pub(crate) fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad integer `{tok}`") })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_short_edge() {
        let mut g = PUniformHypergraph::new(5, 3, true).unwrap();
        g.add_edge(&[2, 0, 1]).unwrap();
        g.add_edge(&[0, 1, 2]).unwrap();
        g.add_edge(&[4, 4, 3]).unwrap();
        g.add_edge(&[3, 1]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "3 5 4 1\n0 1 2\n0 1 2\n3 4 4\n1 3\n");
        assert_eq!(PUniformHypergraph::from_text(&text).unwrap(), g);
        assert_eq!(g.degrees(), vec![2, 3, 2, 2, 2]);
    }

    #[test]
    fn simple_graph_rejects_repeats() {
        let mut g = PUniformHypergraph::new(3, 2, false).unwrap();
        g.add_edge(&[0, 1]).unwrap();
        assert!(g.add_edge(&[1, 0]).is_err());
        assert!(g.add_edge(&[0, 3]).is_err());
        assert!(g.add_edge(&[0]).is_err());
    }
}
