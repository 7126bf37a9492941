//! Gaussian surrogates T (Erdos-Renyi side) and S (regular side).
//!
//! Both are built as weight tensors over the same kernel, so any solver that
//! maximizes a Hamiltonian also maximizes the surrogates. The constraint level
//! alpha(sigma) = n^-p * sum f depends only on label counts.

use std::collections::BTreeMap;

use rand::Rng;

use super::tensor::GaussianTensor;
use crate::combinatorics::{falling, has_repeat, orderings};
use crate::error::{invalid, Error, Result};
use crate::objectives::{decode, psi, Kernel, WeightTensor};
use crate::solvers::{for_each_config, ConstraintSet, Model, SolverChoice, DEFAULT_BUDGET};

/// Which index tuples the surrogate sums run over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumMode {
    /// Tuples of distinct indices.
    #[default]
    Distinct,
    /// All n^p tuples, repeated indices included.
    Unrestricted,
}

/// alpha = n^-p * sum over tuples of f, from the label counts alone.
pub fn alpha_of_counts(kernel: &Kernel, counts: &[usize], mode: SumMode) -> Result<f64> {
    let q = kernel.q();
    if counts.len() != q {
        return Err(Error::DimensionMismatch("counts do not match the alphabet".into()));
    }
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(invalid("alpha needs at least one vertex"));
    }
    let p = kernel.p();
    match mode {
        SumMode::Unrestricted => {
            let m: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
            psi(kernel, &m).or_else(|_| {
                // rounding of the fractions can leave the simplex by an ulp
                let total: f64 = m.iter().sum();
                psi(kernel, &m.iter().map(|x| x / total).collect::<Vec<_>>())
            })
        }
        SumMode::Distinct => {
            let mut args = vec![0u8; p];
            let mut mult = vec![0usize; q];
            let mut total = 0.0;
            for code in 0..q.pow(p as u32) {
                decode(code, q, &mut args);
                mult.iter_mut().for_each(|m| *m = 0);
                for &a in &args {
                    mult[a as usize] += 1;
                }
                let ways: f64 = mult.iter().zip(counts).map(|(&k, &c)| falling(c, k)).product();
                if ways != 0.0 {
                    total += kernel.eval_code(code) * ways;
                }
            }
            Ok(total / (n as f64).powi(p as i32))
        }
    }
}

/// Default bin width for alpha: p!/n^p, the spacing of alpha for integer
/// valued kernels on distinct tuples (2/n^2 for pairs).
pub fn default_alpha_width(n: usize, p: usize) -> f64 {
    crate::combinatorics::factorial(p as u64) as f64 / (n as f64).powi(p as i32)
}

fn prod_mult_factorial(t: &[u32]) -> f64 {
    crate::combinatorics::factorial(t.len() as u64) as f64 / orderings(t) as f64
}

fn check(tensor: &GaussianTensor, kernel: &Kernel, mode: SumMode) -> Result<()> {
    if tensor.mode() == super::TensorMode::IidArray {
        return Err(invalid("surrogates need a symmetric tensor"));
    }
    if tensor.p() != kernel.p() {
        return Err(Error::DimensionMismatch(format!("tensor arity {} vs kernel arity {}", tensor.p(), kernel.p())));
    }
    if mode == SumMode::Distinct && tensor.with_diagonal() {
        return Err(invalid("distinct-index surrogate given a tensor with diagonal entries"));
    }
    Ok(())
}

/// G_i = sum over (m_2..m_p) of J[i, m_2..m_p] / n^((p-1)/2).
pub fn g_vector(tensor: &GaussianTensor) -> Vec<f64> {
    let n = tensor.n();
    let p = tensor.p();
    let norm = (n as f64).powf((p as f64 - 1.0) / 2.0);
    let mut g = vec![0.0; n];
    tensor.for_each_entry(|t, j| {
        let ord = orderings(t) as f64;
        let mut k = 0;
        while k < t.len() {
            let mut run = 1;
            while k + run < t.len() && t[k + run] == t[k] {
                run += 1;
            }
            // orderings with vertex t[k] in the first slot
            g[t[k] as usize] += ord * run as f64 / p as f64 * j;
            k += run;
        }
    });
    g.iter_mut().for_each(|x| *x /= norm);
    g
}

/// Which surrogate objective to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surrogate {
    T,
    S,
}

/// Weight tensor whose Hamiltonian is `sqrt_d * n * objective(sigma) + d * n * alpha(sigma)`,
/// where objective is the bracket maximized by T or S.
fn surrogate_weights(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    which: Surrogate,
    mode: SumMode,
    d: Option<f64>,
) -> Result<WeightTensor> {
    check(tensor, kernel, mode)?;
    let (n, p) = (tensor.n(), tensor.p());
    let nf = n as f64;
    let jn = nf.powf((p as f64 - 1.0) / 2.0);
    let an = nf.powi(p as i32 - 1);
    let (sqrt_d, lin) = match d {
        Some(d) => (d.sqrt(), d / an),
        None => (1.0, 0.0),
    };
    let g = if which == Surrogate::S { Some(g_vector(tensor)) } else { None };
    let mut w = match mode {
        SumMode::Distinct => WeightTensor::new(n, p)?,
        SumMode::Unrestricted => WeightTensor::with_repeats(n, p)?,
    };
    let mut push = |t: &[u32], j: f64| -> Result<()> {
        let mut v = j / jn;
        if let Some(g) = &g {
            v -= t.iter().map(|&i| g[i as usize]).sum::<f64>() / an;
        }
        let v = (sqrt_d * v + lin) / prod_mult_factorial(t);
        if v != 0.0 {
            w.set(t, v)?;
        }
        Ok(())
    };
    let mut err = Ok(());
    match mode {
        SumMode::Distinct => crate::combinatorics::for_each_subset(n, p, |t| {
            if err.is_ok() {
                err = push(t, tensor.get(t));
            }
        }),
        SumMode::Unrestricted => crate::combinatorics::for_each_multiset(n, p, |t| {
            if err.is_ok() {
                let j = if has_repeat(t) && !tensor.with_diagonal() { 0.0 } else { tensor.get(t) };
                err = push(t, j);
            }
        }),
    }
    err?;
    Ok(w)
}

/// Compiled surrogate objective; the Hamiltonian of a configuration is n times
/// the surrogate bracket (plus d n alpha when a degree is supplied).
pub fn surrogate_model(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    which: Surrogate,
    mode: SumMode,
    d: Option<f64>,
) -> Result<Model> {
    Model::new(&surrogate_weights(tensor, kernel, which, mode, d)?, kernel)
}

/// Maximum of the surrogate over each alpha level set, by enumeration.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LevelSets {
    pub n: usize,
    pub width: f64,
    /// bin index -> (alpha of the maximizer, surrogate value on the bin)
    pub bins: BTreeMap<i64, (f64, f64)>,
}

impl LevelSets {
    /// Surrogate value at level `alpha`; negative infinity for an empty level.
    pub fn value_at(&self, alpha: f64) -> f64 {
        let key = (alpha / self.width).round() as i64;
        self.bins.get(&key).map_or(f64::NEG_INFINITY, |b| b.1)
    }

    /// max over levels of d * alpha + sqrt(d) * value.
    pub fn combined(&self, d: f64) -> f64 {
        self.bins.values().map(|&(a, v)| d * a + d.sqrt() * v).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Level-set maxima of T or S by exhaustive enumeration.
pub fn surrogate_levels(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    which: Surrogate,
    mode: SumMode,
    width: Option<f64>,
) -> Result<LevelSets> {
    let model = surrogate_model(tensor, kernel, which, mode, None)?;
    let n = tensor.n();
    let width = width.unwrap_or_else(|| default_alpha_width(n, kernel.p()));
    if !(width > 0.0) {
        return Err(invalid("alpha bin width must be positive"));
    }
    let q = kernel.q();
    let mut cache: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut bins: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    let mut counts = vec![0usize; q];
    let mut failure = None;
    for_each_config(&model, constraint, DEFAULT_BUDGET, |labels, e| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &l in labels {
            counts[l as usize] += 1;
        }
        let alpha = match cache.get(&counts) {
            Some(&a) => a,
            None => match alpha_of_counts(kernel, &counts, mode) {
                Ok(a) => *cache.entry(counts.clone()).or_insert(a),
                Err(e) => {
                    failure.get_or_insert(e);
                    return;
                }
            },
        };
        let value = e / n as f64;
        let key = (alpha / width).round() as i64;
        let slot = bins.entry(key).or_insert((alpha, f64::NEG_INFINITY));
        if value > slot.1 {
            *slot = (alpha, value);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LevelSets { n, width, bins })
}

/// Surrogate maximized over all levels: (1/n) max_sigma of the bracket.
pub fn surrogate_value<R: Rng + ?Sized>(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    which: Surrogate,
    mode: SumMode,
    solver: &SolverChoice,
    rng: &mut R,
) -> Result<f64> {
    let model = surrogate_model(tensor, kernel, which, mode, None)?;
    Ok(solver.solve(&model, constraint, rng)?.0 / tensor.n() as f64)
}

/// max over alpha of (d alpha + sqrt(d) T^alpha) (or S^alpha), computed as a
/// single maximization of the recombined objective.
#[allow(clippy::too_many_arguments)]
pub fn surrogate_combined<R: Rng + ?Sized>(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    which: Surrogate,
    mode: SumMode,
    d: f64,
    solver: &SolverChoice,
    rng: &mut R,
) -> Result<f64> {
    if !(d > 0.0) {
        return Err(invalid("degree d must be positive"));
    }
    let model = surrogate_model(tensor, kernel, which, mode, Some(d))?;
    Ok(solver.solve(&model, constraint, rng)?.0 / tensor.n() as f64)
}

/// T^alpha at one level (or over all levels). Fixed levels need exhaustive
/// enumeration; an empty level gives negative infinity.
pub fn surrogate_t<R: Rng + ?Sized>(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    level: Option<f64>,
    mode: SumMode,
    solver: &SolverChoice,
    rng: &mut R,
) -> Result<f64> {
    match level {
        None => surrogate_value(tensor, kernel, constraint, Surrogate::T, mode, solver, rng),
        Some(alpha) => Ok(surrogate_levels(tensor, kernel, constraint, Surrogate::T, mode, None)?.value_at(alpha)),
    }
}

/// S^alpha at one level (or over all levels); see [`surrogate_t`].
pub fn surrogate_s<R: Rng + ?Sized>(
    tensor: &GaussianTensor,
    kernel: &Kernel,
    constraint: &ConstraintSet,
    level: Option<f64>,
    mode: SumMode,
    solver: &SolverChoice,
    rng: &mut R,
) -> Result<f64> {
    match level {
        None => surrogate_value(tensor, kernel, constraint, Surrogate::S, mode, solver, rng),
        Some(alpha) => Ok(surrogate_levels(tensor, kernel, constraint, Surrogate::S, mode, None)?.value_at(alpha)),
    }
}
