//! Dense +-1 spin objectives with cached local fields.
//!
//! H(s) = c + sum_i b_i s_i + sum_{i<j} K_ij s_i s_j + sum_{i<j<k} W_ijk s_i s_j s_k
//!
//! Single flips cost O(1) to evaluate and O(n) (pairs) or O(n^2) (triples) to
//! accept. Used for Gaussian surrogates, where every tuple carries a weight.

use super::anneal::SpinObjective;
use crate::error::{invalid, Result};
use crate::objectives::pm1;

#[derive(Debug, Clone)]
pub struct DenseIsing {
    n: usize,
    constant: f64,
    field: Vec<f64>,
    pair: Vec<f64>,
    triple: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct DenseState {
    labels: Vec<u8>,
    spins: Vec<f64>,
    local: Vec<f64>,
}

impl DenseIsing {
    pub fn new(n: usize) -> Self {
        Self { n, constant: 0.0, field: vec![0.0; n], pair: vec![0.0; n * n], triple: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_constant(&mut self, v: f64) {
        self.constant += v;
    }

    pub fn add_field(&mut self, i: usize, v: f64) {
        self.field[i] += v;
    }

    pub fn add_pair(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(invalid(format!("pair ({i},{j}) invalid for n={}", self.n)));
        }
        self.pair[i * self.n + j] += v;
        self.pair[j * self.n + i] += v;
        Ok(())
    }

    pub fn add_triple(&mut self, i: usize, j: usize, k: usize, v: f64) -> Result<()> {
        let n = self.n;
        if i == j || j == k || i == k || i >= n || j >= n || k >= n {
            return Err(invalid(format!("triple ({i},{j},{k}) invalid for n={n}")));
        }
        let w = self.triple.get_or_insert_with(|| vec![0.0; n * n * n]);
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            w[(a * n + b) * n + c] += v;
        }
        Ok(())
    }

    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.pair[i * self.n + j]
    }

    pub fn energy_spins(&self, s: &[f64]) -> f64 {
        let n = self.n;
        let mut e = self.constant;
        for i in 0..n {
            e += self.field[i] * s[i];
        }
        for i in 0..n {
            let row = &self.pair[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in i + 1..n {
                acc += row[j] * s[j];
            }
            e += s[i] * acc;
        }
        if let Some(w) = &self.triple {
            for i in 0..n {
                for j in i + 1..n {
                    let row = &w[(i * n + j) * n..(i * n + j + 1) * n];
                    let mut acc = 0.0;
                    for k in j + 1..n {
                        acc += row[k] * s[k];
                    }
                    e += s[i] * s[j] * acc;
                }
            }
        }
        e
    }

    fn local_fields(&self, s: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut h = self.field.clone();
        for i in 0..n {
            let row = &self.pair[i * n..(i + 1) * n];
            h[i] += row.iter().zip(s).map(|(k, x)| k * x).sum::<f64>();
        }
        if let Some(w) = &self.triple {
            for (i, hi) in h.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..n {
                    let row = &w[(i * n + j) * n..(i * n + j + 1) * n];
                    let mut inner = 0.0;
                    for k in j + 1..n {
                        inner += row[k] * s[k];
                    }
                    acc += s[j] * inner;
                }
                *hi += acc;
            }
        }
        h
    }

    fn flip(&self, st: &mut DenseState, i: usize) {
        let n = self.n;
        let d = -2.0 * st.spins[i];
        let row = &self.pair[i * n..(i + 1) * n];
        for (h, k) in st.local.iter_mut().zip(row) {
            *h += k * d;
        }
        if let Some(w) = &self.triple {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let wr = &w[(i * n + j) * n..(i * n + j + 1) * n];
                let inner: f64 = wr.iter().zip(&st.spins).map(|(a, b)| a * b).sum();
                st.local[j] += d * inner;
            }
        }
        st.spins[i] = -st.spins[i];
        st.labels[i] ^= 1;
    }
}

impl SpinObjective for DenseIsing {
    type State = DenseState;

    fn n(&self) -> usize {
        self.n
    }
    fn q(&self) -> usize {
        2
    }
    fn scale(&self) -> f64 {
        let t = self.triple.as_ref().map_or(0.0, |w| w.iter().map(|x| x.abs()).sum::<f64>() / 6.0);
        self.constant.abs() + self.field.iter().map(|x| x.abs()).sum::<f64>() + self.pair.iter().map(|x| x.abs()).sum::<f64>() / 2.0 + t
    }
    fn init(&self, labels: Vec<u8>) -> DenseState {
        let spins: Vec<f64> = labels.iter().map(|&l| pm1(l)).collect();
        let local = self.local_fields(&spins);
        DenseState { labels, spins, local }
    }
    fn labels<'a>(&self, state: &'a DenseState) -> &'a [u8] {
        &state.labels
    }
    fn energy(&self, labels: &[u8]) -> f64 {
        let s: Vec<f64> = labels.iter().map(|&l| pm1(l)).collect();
        self.energy_spins(&s)
    }
    fn delta_single(&self, st: &mut DenseState, i: usize, new: u8) -> f64 {
        if new == st.labels[i] {
            0.0
        } else {
            -2.0 * st.spins[i] * st.local[i]
        }
    }
    fn apply_single(&self, st: &mut DenseState, i: usize, new: u8) {
        if new != st.labels[i] {
            self.flip(st, i);
        }
    }
    fn delta_swap(&self, st: &mut DenseState, i: usize, j: usize) -> f64 {
        if st.labels[i] == st.labels[j] {
            return 0.0;
        }
        let n = self.n;
        let (si, sj) = (st.spins[i], st.spins[j]);
        let mut coupling = self.pair[i * n + j];
        if let Some(w) = &self.triple {
            let wr = &w[(i * n + j) * n..(i * n + j + 1) * n];
            coupling += wr.iter().zip(&st.spins).map(|(a, b)| a * b).sum::<f64>();
        }
        -2.0 * si * st.local[i] - 2.0 * sj * st.local[j] + 4.0 * si * sj * coupling
    }
    fn apply_swap(&self, st: &mut DenseState, i: usize, j: usize) {
        if st.labels[i] != st.labels[j] {
            self.flip(st, i);
            self.flip(st, j);
        }
    }
}
