//! The Dubrovin equation at the irregular singularity, its residual and its
//! formal solutions.

pub mod formal;
pub mod residual;

pub use formal::{
    formal_continuous, formal_discrete, formal_discrete_perturbed, left_inverse_ap, recursion_residuals,
    CriticalChoice, FormalSolution,
};
pub use residual::{dubrovin_residual, ResidualEstimate, DEFAULT_STEP};
