//! Numerics for the dispersionless 2D Toda Dubrovin–Frobenius manifold at
//! finite truncation.

pub mod canonical;
pub mod dubrovin;
pub mod integral;
pub mod error;
pub mod laurent;
pub mod manifold;
pub mod presets;
pub mod quadrature;
pub mod resurgence;
pub mod specfun;
pub mod verify;

pub use error::{Result, TodaError};
pub use laurent::{LaurentSeries, TruncationParams, C64};
