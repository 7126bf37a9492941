use std::path::Path;

use crate::ensembles::{gen_configuration_regular, gen_er_hypergraph, gen_poisson_cloning, gen_sbm, sbm_rates, PUniformHypergraph};
use crate::error::{invalid, Error, Result};
use crate::objectives::{gen_xorsat, Kernel, WeightTensor, XorsatInstance};
use crate::rng::stream;
use crate::solvers::{ConstraintSet, Model, SolverChoice};

use super::config::KernelName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Er,
    Regular,
    Poisson,
    Sbm,
    Xorsat,
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(Self::Er),
            "regular" => Ok(Self::Regular),
            "poisson" => Ok(Self::Poisson),
            "sbm" => Ok(Self::Sbm),
            "xorsat" => Ok(Self::Xorsat),
            other => Err(invalid(format!("unknown instance kind `{other}` (er, regular, poisson, sbm, xorsat)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceParams {
    pub n: usize,
    pub p: usize,
    pub d: f64,
    /// SNR for planted bisection.
    pub xi: f64,
}

/// Canonical text of a freshly sampled instance.
pub fn gen_instance(kind: InstanceKind, params: &InstanceParams, seed: u64) -> Result<String> {
    let InstanceParams { n, p, d, xi } = *params;
    let mut rng = stream(seed, 0);
    Ok(match kind {
        InstanceKind::Er => gen_er_hypergraph(n, p, d, &mut rng)?.to_text(),
        InstanceKind::Regular => {
            if d.fract() != 0.0 || d < 0.0 {
                return Err(invalid(format!("regular degree must be a non-negative integer, got {d}")));
            }
            gen_configuration_regular(n, p, d as usize, &mut rng)?.to_text()
        }
        InstanceKind::Poisson => gen_poisson_cloning(n, p, d, &mut rng)?.graph.to_text(),
        InstanceKind::Sbm => {
            if p != 2 {
                return Err(invalid("planted bisection graphs have p = 2"));
            }
            let (a, b) = sbm_rates(d, xi);
            gen_sbm(n, a, b, &mut rng)?.to_text()
        }
        InstanceKind::Xorsat => gen_xorsat(n, p, d, &mut rng)?.to_text(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub kernel: KernelName,
    pub q: usize,
    pub constraint: ConstraintSet,
    pub solver: SolverChoice,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SolveReport {
    pub n: usize,
    /// Maximum of the Hamiltonian found.
    pub value: f64,
    /// For XORSAT files: the number of satisfied clauses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<f64>,
    pub labels: Vec<u8>,
    pub solver: String,
}

/// Solves an instance file. XORSAT files (header `p n m`) use the XOR
/// kernel; hypergraph files (header `p n m multi`) use `opts.kernel`.
pub fn solve_instance(path: &Path, opts: &SolveOptions) -> Result<SolveReport> {
    let text = std::fs::read_to_string(path)?;
    let header_len = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .map_or(0, |l| l.split_whitespace().count());
    let mut rng = stream(opts.seed, 0);
    match header_len {
        3 => {
            let inst = XorsatInstance::from_text(&text)?;
            let model = Model::new(&inst.weights()?, &Kernel::xor(inst.p())?)?;
            let (value, labels) = opts.solver.solve(&model, &opts.constraint, &mut rng)?;
            Ok(SolveReport {
                n: inst.n(),
                value,
                satisfied: Some(inst.satisfied_from_hamiltonian(value)),
                labels,
                solver: opts.solver.label(),
            })
        }
        4 => {
            let g = PUniformHypergraph::from_text(&text)?;
            let kernel = opts.kernel.build(g.p(), opts.q)?;
            let model = Model::new(&WeightTensor::adjacency(&g)?, &kernel)?;
            let (value, labels) = opts.solver.solve(&model, &opts.constraint, &mut rng)?;
            Ok(SolveReport { n: g.n(), value, satisfied: None, labels, solver: opts.solver.label() })
        }
        _ => Err(Error::Parse { line: 1, msg: "unrecognized instance header".into() }),
    }
}
