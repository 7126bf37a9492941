use std::path::PathBuf;

use crate::ensembles::ErVariant;
use crate::error::{invalid, Error, Result};
use crate::experiments::Problem;
use crate::objectives::Kernel;
use crate::solvers::{ConstraintSet, SolverChoice};

/// A grid axis given either as a single value or as a list.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    InterpolationGap,
    SqrtDCoefficient,
    ConcentrationScan,
    ErVsRegular,
    PspinGroundState,
    SbmSurrogate,
    BetaSchedule,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::InterpolationGap => "interpolation_gap",
            Self::SqrtDCoefficient => "sqrt_d_coefficient",
            Self::ConcentrationScan => "concentration_scan",
            Self::ErVsRegular => "er_vs_regular",
            Self::PspinGroundState => "pspin_ground_state",
            Self::SbmSurrogate => "sbm_surrogate",
            Self::BetaSchedule => "beta_schedule",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemName {
    #[default]
    Qcut,
    Xorsat,
    SbmBisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelName {
    /// 1 unless all arguments agree.
    #[default]
    Cut,
    /// Product of +-1 spins (q = 2).
    Xor,
    /// 1 when every argument is label 0.
    Indicator,
}

impl KernelName {
    pub fn build(&self, p: usize, q: usize) -> Result<Kernel> {
        match self {
            Self::Cut => Kernel::cut(p, q),
            Self::Xor if q == 2 => Kernel::xor(p),
            Self::Xor => Err(invalid(format!("xor kernel needs q = 2, got {q}"))),
            Self::Indicator => Kernel::indicator(p, q, 0),
        }
    }
}

fn one<T>(x: T) -> OneOrMany<T> {
    OneOrMany::One(x)
}

fn default_p() -> OneOrMany<usize> {
    one(2)
}

fn default_q() -> OneOrMany<usize> {
    one(2)
}

fn default_beta() -> OneOrMany<f64> {
    one(1.0)
}

fn default_xi() -> OneOrMany<f64> {
    one(1.0)
}

fn default_delta() -> OneOrMany<f64> {
    one(0.125)
}

fn default_replicas() -> usize {
    16
}

fn default_big_d() -> f64 {
    1.0
}

/// Declarative description of one run: an experiment evaluated on the
/// Cartesian product of the grid axes.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub n: Option<OneOrMany<usize>>,
    #[serde(default = "default_p")]
    pub p: OneOrMany<usize>,
    #[serde(default = "default_q")]
    pub q: OneOrMany<usize>,
    #[serde(default)]
    pub d: Option<OneOrMany<f64>>,
    #[serde(default = "default_beta")]
    pub beta: OneOrMany<f64>,
    #[serde(default = "default_xi")]
    pub xi: OneOrMany<f64>,
    #[serde(default = "default_delta")]
    pub delta: OneOrMany<f64>,
    #[serde(default)]
    pub problem: ProblemName,
    #[serde(default)]
    pub kernel: KernelName,
    #[serde(default)]
    pub constraint: ConstraintSet,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverChoice,
    #[serde(default)]
    pub er_variant: ErVariant,
    /// Interpolation constant D of the beta trade-off bound.
    #[serde(default = "default_big_d")]
    pub big_d: f64,
    #[serde(default)]
    pub ledger: Option<PathBuf>,
}

/// Parameters of a single cell of the grid.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Cell {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub d: f64,
    pub beta: f64,
    pub xi: f64,
    pub delta: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        let needs_n = !matches!(self.experiment, BetaSchedule);
        let needs_d = !matches!(self.experiment, PspinGroundState | SbmSurrogate);
        if needs_n && self.n.as_ref().is_none_or(|g| g.values().is_empty()) {
            return Err(invalid(format!("experiment {} needs a non-empty `n`", self.experiment.name())));
        }
        if needs_d && self.d.as_ref().is_none_or(|g| g.values().is_empty()) {
            return Err(invalid(format!("experiment {} needs a non-empty `d`", self.experiment.name())));
        }
        let empty = [
            self.p.values().is_empty(),
            self.q.values().is_empty(),
            self.beta.values().is_empty(),
            self.xi.values().is_empty(),
            self.delta.values().is_empty(),
        ];
        if empty.iter().any(|&e| e) {
            return Err(invalid("grid axes must not be empty"));
        }
        if self.replicas < 2 && !matches!(self.experiment, BetaSchedule) {
            return Err(invalid("replicas must be at least 2"));
        }
        Ok(())
    }

    /// Cartesian product of the axes in the order n, p, q, d, beta, xi, delta
    /// (last axis fastest).
    pub fn cells(&self) -> Vec<Cell> {
        let ns = self.n.as_ref().map_or(vec![0], |g| g.values());
        let ds = self.d.as_ref().map_or(vec![0.0], |g| g.values());
        let mut out = Vec::new();
        for &n in &ns {
            for &p in &self.p.values() {
                for &q in &self.q.values() {
                    for &d in &ds {
                        for &beta in &self.beta.values() {
                            for &xi in &self.xi.values() {
                                for &delta in &self.delta.values() {
                                    out.push(Cell { n, p, q, d, beta, xi, delta });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn problem_for(&self, cell: &Cell) -> Problem {
        match self.problem {
            ProblemName::Qcut => Problem::Qcut { q: cell.q },
            ProblemName::Xorsat => Problem::Xorsat { p: cell.p },
            ProblemName::SbmBisection => Problem::SbmBisection { xi: cell.xi },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_and_round_trip() {
        let c = RunConfig::from_json(r#"{"experiment":"concentration_scan","n":[8,16],"d":8,"replicas":16,"seed":1}"#).unwrap();
        assert_eq!(c.cells().len(), 2);
        let back = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r = RunConfig::from_json(r#"{"experiment":"concentration_scan","n":8,"d":8,"seed":1,"replica":3}"#);
        assert!(r.is_err());
        let nested = r#"{"experiment":"concentration_scan","n":8,"d":8,"seed":1,
            "solver":{"anneal":{"beta_start":0.1,"beta_end":5,"sweeps":10,"restarts":1,"typo":0}}}"#;
        assert!(RunConfig::from_json(nested).is_err());
    }

    #[test]
    fn missing_axes_are_rejected() {
        assert!(RunConfig::from_json(r#"{"experiment":"er_vs_regular","n":8,"seed":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment":"pspin_ground_state","n":8,"seed":1}"#).is_ok());
    }

    #[test]
    fn grid_is_cartesian() {
        let c = RunConfig::from_json(r#"{"experiment":"sqrt_d_coefficient","n":[10,20],"d":[2,4,8],"seed":3}"#).unwrap();
        let cells = c.cells();
        assert_eq!(cells.len(), 6);
        assert_eq!((cells[0].n, cells[0].d), (10, 2.0));
        assert_eq!((cells[5].n, cells[5].d), (20, 8.0));
    }
}
