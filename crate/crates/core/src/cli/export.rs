use std::io::Write;

use serde_json::Value;

use crate::error::{invalid, Result};
use crate::experiments::{CellStatus, ExperimentRecord};

const PARAM_COLUMNS: [&str; 8] = ["n", "p", "q", "d", "beta", "xi", "delta", "replicas"];

/// Every estimate name any experiment emits, in export order.
pub const ESTIMATE_COLUMNS: [&str; 21] = [
    "phi1",
    "phi2",
    "gap_over_beta",
    "mean_abs_gap_over_beta",
    "value",
    "coefficient",
    "leading",
    "scale",
    "mean",
    "var",
    "v_er",
    "v_reg",
    "diff",
    "diff_over_sqrt_d",
    "diff_cv",
    "c1_sup_residual",
    "min_eig_neg_hessian",
    "density",
    "balanced",
    "unconstrained",
    "beta_schedule",
];

/// The fixed CSV header.
pub fn header() -> Vec<String> {
    let mut h: Vec<String> = ["experiment", "cell", "seed", "status", "exploratory", "wall_time_s"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(PARAM_COLUMNS.iter().map(|s| s.to_string()));
    for e in ESTIMATE_COLUMNS {
        h.push(e.to_string());
        h.push(format!("{e}_sem"));
    }
    h.push("combined_bound".into());
    h
}

/// Full-precision float: 17 significant digits, parses back exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_value(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::Number(x)) if x.is_u64() || x.is_i64() => x.to_string(),
        Some(Value::Number(x)) => fmt_f64(x.as_f64().expect("finite number")),
        Some(other) => other.to_string(),
    }
}

pub fn row(r: &ExperimentRecord) -> Vec<String> {
    let status = match r.status {
        CellStatus::Ok => "ok",
        CellStatus::Failed => "failed",
    };
    let mut out = vec![
        r.experiment.clone(),
        r.cell.to_string(),
        r.seed.to_string(),
        status.to_string(),
        r.exploratory.to_string(),
        fmt_f64(r.wall_time_s),
    ];
    out.extend(PARAM_COLUMNS.iter().map(|k| fmt_value(r.params.get(*k))));
    for e in ESTIMATE_COLUMNS {
        // the beta_schedule experiment stores its beta under "beta"
        let key = if e == "beta_schedule" { "beta" } else { e };
        let est = r.estimates.get(key);
        out.push(est.map_or(String::new(), |x| fmt_f64(x.value)));
        out.push(est.and_then(|x| x.sem).map_or(String::new(), fmt_f64));
    }
    out.push(r.estimates.get("combined_bound").map_or(String::new(), |x| fmt_f64(x.value)));
    out
}

/// Writes the selected records as CSV. An empty selection still writes the
/// header.
pub fn export_csv<W: Write>(records: &[ExperimentRecord], experiment: Option<&str>, out: W) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| invalid(format!("csv: {e}"));
    w.write_record(header()).map_err(io)?;
    let mut count = 0;
    for r in records.iter().filter(|r| experiment.is_none_or(|name| r.experiment == name)) {
        w.write_record(row(r)).map_err(io)?;
        count += 1;
    }
    w.flush()?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1 + 0.2, std::f64::consts::PI, -1e-300, 12345.678901234567, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn header_and_rows_have_equal_width() {
        let r = ExperimentRecord {
            experiment: "x".into(),
            cell: 0,
            params: Default::default(),
            seed: 1,
            estimates: Default::default(),
            exploratory: false,
            status: CellStatus::Ok,
            error: None,
            code_version: "0".into(),
            started_unix_ms: 0,
            finished_unix_ms: 0,
            wall_time_s: 0.0,
        };
        assert_eq!(row(&r).len(), header().len());
    }
}
