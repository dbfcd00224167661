//! Oscillatory-integral solutions of the Dubrovin equation, their closed forms
//! at the special point and their large-`zeta` asymptotics.

pub mod asymptotics;
pub mod contour;
pub mod saddle;

pub use asymptotics::{
    bessel_matching_coefficient, bessel_matching_constants, dominant_saddle, matching_prefactor, truncation_slope,
    DominantSaddle, SlopeFit,
};
pub use contour::{
    dy_bessel, dy_representative, dy_sigma, exponential_coefficients, incompleteness_vector, incompleteness_witness,
    y_sigma, IncompletenessWitness,
};
pub use saddle::{asymptotic_coeffs_residue, asymptotic_functionals, saddle_coeffs, series_power, taylor_at, SaddleExpansion};
