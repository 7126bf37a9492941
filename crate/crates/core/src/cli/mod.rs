//! Run configuration, the JSONL ledger, CSV export and instance files.

mod config;
mod export;
mod instance;
mod run;

pub use config::{Cell, ExperimentKind, KernelName, OneOrMany, ProblemName, RunConfig};
pub use export::{export_csv, fmt_f64, header, ESTIMATE_COLUMNS};
pub use instance::{gen_instance, solve_instance, InstanceKind, InstanceParams, SolveOptions, SolveReport};
pub use run::{append_ledger, read_ledger, run, run_records};
