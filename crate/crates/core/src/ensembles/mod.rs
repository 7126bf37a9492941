//! Random hypergraph ensembles: Erdos-Renyi (simple and Poisson-multiplicity),
//! configuration model, two-stage RED/BLUE construction, Poisson cloning and
//! the planted-bisection block model.

mod configuration;
mod er;
mod hypergraph;
mod poisson_cloning;
mod sbm;

pub use configuration::{gen_configuration_regular, gen_two_stage_regular, two_stage_partition, TwoStageSample};
pub use er::{er_edge_probability, gen_er, gen_er_hypergraph, gen_er_multigraph, ErVariant, ENUMERATION_MAX_N};
pub use hypergraph::PUniformHypergraph;
pub(crate) use hypergraph::parse_numbers;
pub use poisson_cloning::{cloning_mean, gen_poisson_cloning, PoissonCloningSample};
pub use sbm::{gen_sbm, sbm_rates, SbmGraph};
