use std::fmt::Write as _;

use rand::Rng;

use super::spin::{pm1, SpinConfig};
use super::weights::WeightTensor;
use crate::combinatorics::{factorial, has_repeat};
use crate::ensembles::{gen_er_hypergraph, parse_numbers};
use crate::error::{invalid, Error, Result};

/// One parity constraint: the product of the spins in `vars` should equal `sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub vars: Vec<u32>,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorsatInstance {
    n: usize,
    p: usize,
    clauses: Vec<Clause>,
}

impl XorsatInstance {
    pub fn new(n: usize, p: usize, clauses: Vec<Clause>) -> Result<Self> {
        if p < 2 {
            return Err(invalid(format!("clause arity p={p} must be at least 2")));
        }
        let mut clauses = clauses;
        for c in clauses.iter_mut() {
            c.vars.sort_unstable();
            if c.vars.len() != p || has_repeat(&c.vars) || c.vars.iter().any(|&v| v as usize >= n) {
                return Err(invalid(format!("clause {:?} is not a set of {p} variables below {n}", c.vars)));
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(invalid(format!("clause sign {} is not +-1", c.sign)));
            }
        }
        Ok(Self { n, p, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Clauses with `sign * prod(spins) = +1`.
    pub fn satisfied(&self, sigma: &SpinConfig) -> Result<usize> {
        if sigma.q() != 2 || sigma.len() != self.n {
            return Err(Error::DimensionMismatch("XORSAT needs a binary configuration of length n".into()));
        }
        let s = sigma.labels();
        Ok(self
            .clauses
            .iter()
            .filter(|c| c.vars.iter().map(|&v| pm1(s[v as usize])).product::<f64>() * c.sign as f64 > 0.0)
            .count())
    }

    /// Signed weights `b / (p-1)!`, so that the XOR-kernel Hamiltonian equals
    /// `p * sum_a b_a prod sigma`.
    pub fn weights(&self) -> Result<WeightTensor> {
        let mut w = WeightTensor::new(self.n, self.p)?;
        let unit = 1.0 / factorial(self.p as u64 - 1) as f64;
        for c in &self.clauses {
            w.add(&c.vars, c.sign as f64 * unit)?;
        }
        Ok(w)
    }

    /// Satisfied count recovered from an XOR-kernel Hamiltonian value.
    pub fn satisfied_from_hamiltonian(&self, h: f64) -> f64 {
        self.m() as f64 / 2.0 + h / (2.0 * self.p as f64)
    }

    /// Header `p n m`, then one line `b i1 .. ip` per clause with b = 0 for
    /// sign +1 and b = 1 for sign -1.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.p, self.n, self.m());
        for c in &self.clauses {
            let b = if c.sign > 0 { 0 } else { 1 };
            let _ = write!(s, "{b}");
            for v in &c.vars {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let h = parse_numbers(header, hl + 1)?;
        if h.len() != 3 || h.iter().any(|&x| x < 0) {
            return Err(Error::Parse { line: hl + 1, msg: "header must be `p n m`".into() });
        }
        let (p, n, m) = (h[0] as usize, h[1] as usize, h[2] as usize);
        let mut clauses = Vec::with_capacity(m);
        for (i, line) in lines {
            let nums = parse_numbers(line, i + 1)?;
            if nums.len() != p + 1 || !(0..=1).contains(&nums[0]) || nums[1..].iter().any(|&x| x < 0) {
                return Err(Error::Parse { line: i + 1, msg: format!("expected `b i1 .. i{p}` with b in {{0,1}}") });
            }
            let sign = if nums[0] == 0 { 1 } else { -1 };
            clauses.push(Clause { vars: nums[1..].iter().map(|&x| x as u32).collect(), sign });
        }
        if clauses.len() != m {
            return Err(Error::Parse { line: 1, msg: format!("header announces {m} clauses, found {}", clauses.len()) });
        }
        Self::new(n, p, clauses)
    }
}

/// Random instance: clause sets drawn as an Erdos-Renyi p-uniform hypergraph of
/// average degree `d`, each with an independent uniform sign.
pub fn gen_xorsat<R: Rng + ?Sized>(n: usize, p: usize, d: f64, rng: &mut R) -> Result<XorsatInstance> {
    let g = gen_er_hypergraph(n, p, d, rng)?;
    let clauses = g
        .edge_list()
        .map(|t| Clause { vars: t.to_vec(), sign: if rng.random::<bool>() { 1 } else { -1 } })
        .collect();
    XorsatInstance::new(n, p, clauses)
}
