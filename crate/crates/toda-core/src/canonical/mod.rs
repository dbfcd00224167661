//! The spectral curve, canonical coordinates, eigen-covectors of the Euler
//! multiplication and the diagonalizing isomorphism.

pub mod critical;
pub mod functional;
pub mod key_lemma;
pub mod psi;
pub mod spectrum;

pub use critical::{find_critical_set, find_critical_set_with_floor, laurent_roots, CriticalPoint, CriticalSet};
pub use functional::WeakFunctional;
pub use key_lemma::key_lemma_residual;
pub use psi::{metric_canonical, psi_forward, psi_inverse, CanonicalData};
pub use spectrum::{
    canonical_value, canonical_value_derivative, dlambda_functional, dlambda_series, du_continuous, du_inner,
    du_outer, eigen_functionals, eigen_representative, eigen_residual, lambda_sigma, sigma_at, sigma_curve,
    EigenFunctionals,
};
