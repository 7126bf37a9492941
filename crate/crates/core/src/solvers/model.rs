use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::objectives::{Kernel, WeightTensor};

const MAX_ARITY: usize = 8;

/// A weight tensor and kernel compiled into flat terms with per-vertex
/// incidence lists, for O(degree) energy differences.
///
/// `energy` sums the terms in the same order and with the same arithmetic as
/// `objectives::hamiltonian`, so the two agree bit for bit.
#[derive(Debug, Clone)]
pub struct Model {
    n: usize,
    p: usize,
    kernel: Kernel,
    verts: Vec<u32>,
    coef: Vec<f64>,
    short: Option<(Vec<u32>, f64)>,
    incidence: Vec<Vec<u32>>,
    scale: f64,
}

impl Model {
    pub fn new(weights: &WeightTensor, kernel: &Kernel) -> Result<Self> {
        if weights.p() != kernel.p() {
            return Err(Error::DimensionMismatch(format!(
                "weights arity {} vs kernel arity {}",
                weights.p(),
                kernel.p()
            )));
        }
        let (n, p) = (weights.n(), weights.p());
        let pf = factorial(p as u64) as f64;
        let mut verts = Vec::with_capacity(weights.len() * p);
        let mut coef = Vec::with_capacity(weights.len());
        let mut incidence = vec![Vec::new(); n];
        for (t, w) in weights.iter() {
            let id = coef.len() as u32;
            verts.extend_from_slice(t);
            coef.push(pf * w);
            for (k, &v) in t.iter().enumerate() {
                if k == 0 || t[k - 1] != v {
                    incidence[v as usize].push(id);
                }
            }
        }
        let short = weights.short().and_then(|(t, w)| {
            kernel.eval_short(&vec![0; t.len()]).map(|_| (t.to_vec(), pf * w))
        });
        if let Some((t, _)) = &short {
            let id = coef.len() as u32;
            for (k, &v) in t.iter().enumerate() {
                if k == 0 || t[k - 1] != v {
                    incidence[v as usize].push(id);
                }
            }
        }
        let fmax = kernel.sup_norm();
        let scale = coef.iter().map(|c| c.abs()).sum::<f64>() * fmax + short.as_ref().map_or(0.0, |(_, c)| c.abs() * fmax);
        Ok(Self { n, p, kernel: kernel.clone(), verts, coef, short, incidence, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.kernel.q()
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// Upper bound on |H| over all configurations.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    fn term(&self, id: usize, labels: &[u8]) -> f64 {
        if id < self.coef.len() {
            let mut args = [0u8; MAX_ARITY];
            for (a, &v) in args.iter_mut().zip(&self.verts[id * self.p..(id + 1) * self.p]) {
                *a = labels[v as usize];
            }
            self.coef[id] * self.kernel.eval(&args[..self.p])
        } else {
            let (t, c) = self.short.as_ref().expect("short term id");
            let args: Vec<u8> = t.iter().map(|&v| labels[v as usize]).collect();
            c * self.kernel.eval_short(&args).unwrap_or(0.0)
        }
    }

    fn term_has(&self, id: usize, v: u32) -> bool {
        if id < self.coef.len() {
            self.verts[id * self.p..(id + 1) * self.p].contains(&v)
        } else {
            self.short.as_ref().is_some_and(|(t, _)| t.contains(&v))
        }
    }

    pub fn energy(&self, labels: &[u8]) -> f64 {
        let mut total = 0.0;
        for id in 0..self.coef.len() {
            total += self.term(id, labels);
        }
        if self.short.is_some() {
            total += self.term(self.coef.len(), labels);
        }
        total
    }

    /// Energy change when vertex `i` takes label `new`.
    pub fn delta_single(&self, labels: &mut [u8], i: usize, new: u8) -> f64 {
        let old = labels[i];
        if old == new {
            return 0.0;
        }
        let inc = &self.incidence[i];
        let before: f64 = inc.iter().map(|&id| self.term(id as usize, labels)).sum();
        labels[i] = new;
        let after: f64 = inc.iter().map(|&id| self.term(id as usize, labels)).sum();
        labels[i] = old;
        after - before
    }

    /// Energy change when vertices `i` and `j` exchange labels.
    pub fn delta_swap(&self, labels: &mut [u8], i: usize, j: usize) -> f64 {
        if labels[i] == labels[j] {
            return 0.0;
        }
        let ids = || {
            self.incidence[i]
                .iter()
                .copied()
                .chain(self.incidence[j].iter().copied().filter(|&id| !self.term_has(id as usize, i as u32)))
        };
        let before: f64 = ids().map(|id| self.term(id as usize, labels)).sum();
        labels.swap(i, j);
        let after: f64 = ids().map(|id| self.term(id as usize, labels)).sum();
        labels.swap(i, j);
        after - before
    }
}
