use std::collections::HashMap;

use super::spin::pm1;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// 1 unless all arguments agree.
    Cut,
    /// Product of +-1 spins (binary alphabet only).
    Xor,
    Constant,
    /// 1 iff every argument equals a fixed label.
    Indicator,
    Table,
}

/// Symmetric function f: X^p -> R on an alphabet of size q.
///
/// Values are computed once per sorted multiset of arguments and written to
/// every permutation of the lookup table, so symmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    p: usize,
    q: usize,
    kind: KernelKind,
    table: Vec<f64>,
}

impl Kernel {
    pub fn from_fn(p: usize, q: usize, f: impl Fn(&[u8]) -> f64) -> Result<Self> {
        Self::build(p, q, KernelKind::Table, f)
    }

    fn build(p: usize, q: usize, kind: KernelKind, f: impl Fn(&[u8]) -> f64) -> Result<Self> {
        if p == 0 || p > 8 {
            return Err(invalid(format!("kernel arity p={p} must be in 1..=8")));
        }
        if !(2..=16).contains(&q) {
            return Err(invalid(format!("alphabet size q={q} must be in 2..=16")));
        }
        let size = q.pow(p as u32);
        let mut memo: HashMap<Vec<u8>, f64> = HashMap::new();
        let mut table = vec![0.0; size];
        let mut args = vec![0u8; p];
        for (code, slot) in table.iter_mut().enumerate() {
            decode(code, q, &mut args);
            let mut key = args.clone();
            key.sort_unstable();
            *slot = *memo.entry(key).or_insert_with_key(|k| f(k));
        }
        Ok(Self { p, q, kind, table })
    }

    /// f = 1 unless all p arguments are equal (Max q-cut for p = 2).
    pub fn cut(p: usize, q: usize) -> Result<Self> {
        Self::build(p, q, KernelKind::Cut, |a| if a.iter().all(|&x| x == a[0]) { 0.0 } else { 1.0 })
    }

    /// f = product of the +-1 spins.
    pub fn xor(p: usize) -> Result<Self> {
        Self::build(p, 2, KernelKind::Xor, |a| a.iter().map(|&x| pm1(x)).product())
    }

    pub fn constant(p: usize, q: usize, c: f64) -> Result<Self> {
        Self::build(p, q, KernelKind::Constant, |_| c)
    }

    /// f = 1 iff every argument equals `label`.
    pub fn indicator(p: usize, q: usize, label: u8) -> Result<Self> {
        if label as usize >= q {
            return Err(invalid(format!("label {label} not below q={q}")));
        }
        Self::build(p, q, KernelKind::Indicator, |a| if a.iter().all(|&x| x == label) { 1.0 } else { 0.0 })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    #[inline]
    pub fn code(&self, args: &[u8]) -> usize {
        args.iter().rev().fold(0usize, |acc, &a| acc * self.q + a as usize)
    }

    #[inline]
    pub fn eval(&self, args: &[u8]) -> f64 {
        debug_assert_eq!(args.len(), self.p);
        self.table[self.code(args)]
    }

    #[inline]
    pub fn eval_code(&self, code: usize) -> f64 {
        self.table[code]
    }

    /// Value on an edge with fewer than p vertices. Only the XOR kernel has a
    /// natural restriction (the product over present spins); other kernels
    /// drop short edges.
    pub fn eval_short(&self, args: &[u8]) -> Option<f64> {
        match self.kind {
            KernelKind::Xor => Some(args.iter().map(|&x| pm1(x)).product()),
            _ => None,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.table.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0.0)
    }

    /// All table entries indexed by code.
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Invariance under every relabeling of the alphabet (checked on the
    /// generating transpositions).
    pub fn is_label_symmetric(&self) -> bool {
        let mut args = vec![0u8; self.p];
        (0..self.q - 1).all(|k| {
            (0..self.table.len()).all(|code| {
                decode(code, self.q, &mut args);
                for a in args.iter_mut() {
                    if *a as usize == k {
                        *a += 1;
                    } else if *a as usize == k + 1 {
                        *a -= 1;
                    }
                }
                self.table[self.code(&args)] == self.table[code]
            })
        })
    }
}

/// Writes the base-q digits of `code` into `out` (least significant first).
pub fn decode(mut code: usize, q: usize, out: &mut [u8]) {
    for slot in out.iter_mut() {
        *slot = (code % q) as u8;
        code /= q;
    }
}
