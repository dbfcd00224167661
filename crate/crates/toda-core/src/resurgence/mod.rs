//! Borel transform and resummation of the formal integral solutions at the
//! special point, the resummed weak functionals and their Stokes data.

pub mod completeness;
pub mod gevrey;
pub mod laplace;
pub mod resummed;
pub mod stokes;

pub use completeness::{completeness_probe, p_grid, triangular_reconstruction, RankReport};
pub use gevrey::{borel, borel_closed_form, borel_radius_estimate, borel_singularity, phi_series, GevreySeries};
pub use laplace::{
    laplace_along_ray, laplace_ray, lateral_jump, resummation_slope, resummed_closed_form, sector_lift,
    stokes_direction, NearSingularity,
};
pub use resummed::{difference_mismatch, ds_minus_p, ds_p, monodromy_mismatch, relative_gap, ResummedFunctional, DEFAULT_M_MAX};
pub use stokes::{
    dominance_ratios, expected_s_minus, expected_s_plus, inverse, kernel_is_transpose, matmul, max_entry_gap, stokes_family, stokes_pair, theta_zero, transpose,
    KernelEntry, Matrix2, StokesFamilyReport, StokesPair, StokesSampling,
};
