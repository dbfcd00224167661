//! Special functions on the universal cover.

pub mod bessel;
pub mod cover;
pub mod gamma;
pub mod hypergeometric;
pub mod identities;

pub use bessel::{bessel_i, bessel_k, bessel_k_checked};
pub use cover::CoverComplex;
pub use gamma::{digamma, gamma, EULER_GAMMA};
pub use hypergeometric::{hyp2f1, hyp2f1_log_connection, hyp2f1_series, Hyp2f1Continuation};
pub use identities::{identity_suite, IdentityCheck};
