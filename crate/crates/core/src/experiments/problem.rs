use rand::Rng;

use crate::ensembles::{gen_er, gen_sbm, sbm_rates, ErVariant};
use crate::error::{invalid, Result};
use crate::objectives::{gen_xorsat, Kernel, WeightTensor};
use crate::solvers::{ConstraintSet, Model, SolverChoice};

/// Sparse optimization problems with a known order-d leading term.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    /// Max q-cut of an ER graph.
    Qcut { q: usize },
    /// Max number of satisfied clauses of random p-XORSAT.
    Xorsat { p: usize },
    /// Min bisection of a planted-bisection graph with SNR `xi`.
    SbmBisection { xi: f64 },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Qcut { .. } => "qcut",
            Self::Xorsat { .. } => "xorsat",
            Self::SbmBisection { .. } => "sbm_bisection",
        }
    }

    pub fn leading(&self, d: f64) -> f64 {
        match *self {
            Self::Qcut { q } => d / 2.0 * (1.0 - 1.0 / q as f64),
            Self::Xorsat { p } => d / (2.0 * p as f64),
            Self::SbmBisection { .. } => d / 4.0,
        }
    }

    pub fn scale(&self, d: f64) -> f64 {
        match *self {
            Self::Qcut { .. } => d.sqrt() / 2.0,
            Self::Xorsat { p } => 0.5 * (d / p as f64).sqrt(),
            Self::SbmBisection { .. } => -d.sqrt(),
        }
    }

    /// (value / n - leading) / scale.
    pub fn coefficient(&self, value_per_n: f64, d: f64) -> f64 {
        (value_per_n - self.leading(d)) / self.scale(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Qcut { q } if q < 2 => Err(invalid(format!("q-cut needs q >= 2, got {q}"))),
            Self::Xorsat { p } if p < 2 => Err(invalid(format!("XORSAT needs p >= 2, got {p}"))),
            Self::SbmBisection { xi } if !(xi >= 0.0) => Err(invalid(format!("SNR xi={xi} must be non-negative"))),
            _ => Ok(()),
        }
    }

    /// Draws one instance and returns its optimum divided by n.
    pub fn sample_value<R: Rng + ?Sized>(
        &self,
        n: usize,
        d: f64,
        variant: ErVariant,
        solver: &SolverChoice,
        rng: &mut R,
    ) -> Result<f64> {
        self.validate()?;
        let nf = n as f64;
        match *self {
            Self::Qcut { q } => {
                let g = gen_er(variant, n, 2, d, rng)?;
                let model = Model::new(&WeightTensor::adjacency(&g)?, &Kernel::cut(2, q)?)?;
                // every cut edge is counted twice by the Hamiltonian
                Ok(solver.solve(&model, &ConstraintSet::All, rng)?.0 / 2.0 / nf)
            }
            Self::Xorsat { p } => {
                let inst = gen_xorsat(n, p, d, rng)?;
                let model = Model::new(&inst.weights()?, &Kernel::xor(p)?)?;
                let h = solver.solve(&model, &ConstraintSet::All, rng)?.0;
                Ok(inst.satisfied_from_hamiltonian(h) / nf)
            }
            Self::SbmBisection { xi } => {
                let (a, b) = sbm_rates(d, xi);
                let g = gen_sbm(n, a, b, rng)?;
                let kernel = Kernel::from_fn(2, 2, |x| if x[0] != x[1] { -1.0 } else { 0.0 })?;
                let model = Model::new(&WeightTensor::adjacency(&g.graph)?, &kernel)?;
                let h = solver.solve(&model, &ConstraintSet::BalancedBisection, rng)?.0;
                Ok(-h / 2.0 / nf)
            }
        }
    }
}
