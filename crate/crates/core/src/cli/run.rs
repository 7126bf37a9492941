use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde_json::Value;

use super::config::{Cell, ExperimentKind, RunConfig};
use crate::error::{invalid, Result};
use crate::experiments::{
    beta_schedule, combined_bound, concentration_scan, er_vs_regular, interpolation_gap, sqrt_d_coefficient, unix_ms,
    CellStatus, Estimate, Estimates, ExperimentRecord, CODE_VERSION,
};
use crate::gaussian::sbm_surrogate_paired;
use crate::par::map_indices;
use crate::rng::{derive_seed, stream};
use crate::stats::mean_sem;

/// Outcome of one cell: estimates plus the exploratory flag.
type CellOutput = (Estimates, bool);

fn params(cfg: &RunConfig, cell: &Cell) -> BTreeMap<String, Value> {
    use ExperimentKind::*;
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        m.insert(k.to_string(), v);
    };
    if !matches!(cfg.experiment, BetaSchedule) {
        put("n", cell.n.into());
        put("replicas", cfg.replicas.into());
        put("solver", serde_json::to_value(cfg.solver).expect("solver serializes"));
    }
    match cfg.experiment {
        InterpolationGap => {
            put("p", cell.p.into());
            put("q", cell.q.into());
            put("d", cell.d.into());
            put("beta", cell.beta.into());
            put("kernel", serde_json::to_value(cfg.kernel).expect("kernel serializes"));
        }
        SqrtDCoefficient | ConcentrationScan => {
            put("d", cell.d.into());
            put("problem", serde_json::to_value(cfg.problem_for(cell)).expect("problem serializes"));
            put("er_variant", serde_json::to_value(cfg.er_variant).expect("variant serializes"));
        }
        ErVsRegular => {
            put("p", cell.p.into());
            put("q", cell.q.into());
            put("d", cell.d.into());
            put("kernel", serde_json::to_value(cfg.kernel).expect("kernel serializes"));
            put("constraint", serde_json::to_value(&cfg.constraint).expect("constraint serializes"));
            put("er_variant", serde_json::to_value(cfg.er_variant).expect("variant serializes"));
        }
        PspinGroundState => put("p", cell.p.into()),
        SbmSurrogate => put("xi", cell.xi.into()),
        BetaSchedule => {
            put("q", cell.q.into());
            put("d", cell.d.into());
            put("delta", cell.delta.into());
            put("big_d", cfg.big_d.into());
        }
    }
    m
}

fn run_cell(cfg: &RunConfig, cell: &Cell, seed: u64) -> Result<CellOutput> {
    let mut rng = stream(seed, 0);
    let mut est = Estimates::new();
    let mut put = |k: &str, v: f64, sem: Option<f64>| {
        est.insert(k.to_string(), Estimate { value: v, sem });
    };
    let mut exploratory = false;
    match cfg.experiment {
        ExperimentKind::InterpolationGap => {
            let kernel = cfg.kernel.build(cell.p, cell.q)?;
            let g = interpolation_gap(cell.n, cell.p, cell.d, cell.beta, &kernel, cfg.replicas, &mut rng)?;
            put("phi1", g.phi1_mean, Some(g.phi1_sem));
            put("phi2", g.phi2_mean, Some(g.phi2_sem));
            put("gap_over_beta", g.gap_over_beta, Some(g.gap_sem));
            put("mean_abs_gap_over_beta", g.mean_abs_gap_over_beta, Some(g.mean_abs_gap_sem));
        }
        ExperimentKind::SqrtDCoefficient => {
            let problem = cfg.problem_for(cell);
            let rows = sqrt_d_coefficient(problem, cell.n, &[cell.d], cfg.er_variant, &cfg.solver, cfg.replicas, &mut rng)?;
            let r = rows[0];
            put("value", r.value, Some(r.value_sem));
            put("coefficient", r.coefficient, Some(r.sem));
            put("leading", r.leading, None);
            put("scale", r.scale, None);
        }
        ExperimentKind::ConcentrationScan => {
            let problem = cfg.problem_for(cell);
            let s = concentration_scan(problem, &[cell.n], cell.d, cfg.er_variant, &cfg.solver, cfg.replicas, &mut rng)?;
            let r = s.rows[0];
            put("mean", r.mean, Some((r.var / cfg.replicas as f64).sqrt()));
            put("var", r.var, None);
        }
        ExperimentKind::ErVsRegular => {
            if cell.d.fract() != 0.0 || cell.d < 0.0 {
                return Err(invalid(format!("regular graphs need an integer degree, got d={}", cell.d)));
            }
            let kernel = cfg.kernel.build(cell.p, cell.q)?;
            let e = er_vs_regular(&kernel, &cfg.constraint, cell.n, cell.d as usize, cfg.er_variant, &cfg.solver, cfg.replicas, &mut rng)?;
            put("v_er", e.v_er, Some(e.v_er_sem));
            put("v_reg", e.v_reg, Some(e.v_reg_sem));
            put("diff", e.diff, Some(e.diff_sem));
            put("diff_over_sqrt_d", e.diff_over_sqrt_d, Some(e.diff_over_sqrt_d_sem));
            put("diff_cv", e.diff_cv, Some(e.diff_cv_sem));
            put("c1_sup_residual", e.conditions.c1_sup_residual, None);
            put("min_eig_neg_hessian", e.conditions.min_eig_neg_hessian, None);
            exploratory = e.exploratory;
        }
        ExperimentKind::PspinGroundState => {
            let g = crate::gaussian::pspin_ground_state(cell.n, cell.p, &cfg.solver, cfg.replicas, &mut rng)?;
            put("density", g.mean, Some(g.sem));
        }
        ExperimentKind::SbmSurrogate => {
            let pairs = sbm_surrogate_paired(cell.n, cell.xi, &cfg.solver, cfg.replicas, &mut rng)?;
            let bal = mean_sem(&pairs.iter().map(|x| x.0).collect::<Vec<_>>());
            let unc = mean_sem(&pairs.iter().map(|x| x.1).collect::<Vec<_>>());
            put("balanced", bal.mean, Some(bal.sem));
            put("unconstrained", unc.mean, Some(unc.sem));
        }
        ExperimentKind::BetaSchedule => {
            let beta = beta_schedule(cell.d, cell.delta)?;
            put("beta", beta, None);
            put("combined_bound", combined_bound(cfg.big_d, beta, cell.d, cell.q), None);
        }
    }
    Ok((est, exploratory))
}

/// Runs every cell of the grid and returns one record per cell, in grid
/// order. A failing cell yields a `Failed` record and does not stop the run.
pub fn run_records(cfg: &RunConfig) -> Vec<ExperimentRecord> {
    let cells = cfg.cells();
    map_indices(cells.len(), |i| {
        let cell = &cells[i];
        let seed = derive_seed(cfg.seed, i as u64);
        let started = unix_ms();
        let clock = Instant::now();
        let out = run_cell(cfg, cell, seed);
        let wall_time_s = clock.elapsed().as_secs_f64();
        let (estimates, exploratory, status, error) = match out {
            Ok((e, x)) => (e, x, CellStatus::Ok, None),
            Err(e) => {
                log::warn!("cell {i} of {} failed: {e}", cfg.experiment.name());
                (Estimates::new(), false, CellStatus::Failed, Some(e.to_string()))
            }
        };
        ExperimentRecord {
            experiment: cfg.experiment.name().to_string(),
            cell: i,
            params: params(cfg, cell),
            seed,
            estimates,
            exploratory,
            status,
            error,
            code_version: CODE_VERSION.to_string(),
            started_unix_ms: started,
            finished_unix_ms: unix_ms(),
            wall_time_s,
        }
    })
}

/// Appends records to a JSONL ledger, one line each.
pub fn append_ledger(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).expect("record serializes"));
        buf.push('\n');
    }
    f.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn read_ledger(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| crate::Error::Parse { line: i + 1, msg: e.to_string() })
        })
        .collect()
}

/// Runs the config, appends to the ledger, and reports whether every cell
/// succeeded.
pub fn run(cfg: &RunConfig, ledger: &Path) -> Result<(Vec<ExperimentRecord>, bool)> {
    cfg.validate()?;
    let records = run_records(cfg);
    append_ledger(ledger, &records)?;
    let ok = records.iter().all(|r| r.status == CellStatus::Ok);
    Ok((records, ok))
}
