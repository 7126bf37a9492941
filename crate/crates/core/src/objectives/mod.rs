//! Symmetric kernels, weight tensors and the objectives built from them.

mod hamiltonian;
mod kernel;
mod psi;
mod spin;
mod weights;
mod xorsat;

pub use hamiltonian::{bisection_cut, hamiltonian, qcut_value};
pub use kernel::{decode, Kernel, KernelKind};
pub use psi::{c1_residual, c1_residual_at, project_simplex, psi, psi_max_and_hessian, sup_norm, PsiMax};
pub use spin::{label_of_pm1, pm1, SpinConfig};
pub use weights::WeightTensor;
pub use xorsat::{gen_xorsat, Clause, XorsatInstance};
