//! Parameterized experiment cells and their ledger records.

mod coefficient;
mod concentration;
mod equivalence;
mod interpolation;
mod problem;
mod record;
mod schedule;

pub use coefficient::{sqrt_d_coefficient, CoefficientRow};
pub use concentration::{concentration_scan, ConcentrationScan, FTest, VarianceRow};
pub use equivalence::{check_conditions, er_vs_regular, Conditions, EquivalenceEstimate};
pub use interpolation::{interpolation_gap, GapEstimate};
pub use problem::Problem;
pub use record::{unix_ms, CellStatus, Estimate, Estimates, ExperimentRecord, CODE_VERSION};
pub use schedule::{beta_schedule, combined_bound};
