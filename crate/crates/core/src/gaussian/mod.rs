//! Gaussian disorder and the surrogate optimization problems built on it.

mod pspin;
mod sbm;
mod surrogate;
mod tensor;

pub use pspin::{extrapolate, pspin_dense, pspin_dense_from_array, pspin_ground_state, pspin_model, Extrapolation, GroundStateEstimate};
pub use sbm::{sbm_objective, sbm_surrogate, sbm_surrogate_paired, SbmConstraint};
pub use surrogate::{
    alpha_of_counts, default_alpha_width, g_vector, surrogate_combined, surrogate_levels, surrogate_model, surrogate_s,
    surrogate_t, surrogate_value, LevelSets, SumMode, Surrogate,
};
pub use tensor::{
    gen_iid_array, gen_kernel_variance_tensor, gen_standard_symmetric_pi_sum, gen_standard_symmetric_tensor,
    gen_standard_symmetric_tensor_with_diagonal, GaussianTensor, GoeMatrix, TensorMode,
};
