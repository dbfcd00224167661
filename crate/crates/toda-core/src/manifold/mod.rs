//! Points of the manifold, tangent vectors and the Frobenius structure on them.

pub mod conditions;
pub mod operators;
pub mod point;
pub mod tangent;

pub use conditions::{check_conditions, check_conditions_with_floor, ConditionReport};
pub use operators::{apply_u, apply_u_exact, apply_u_expanded, apply_u_special, apply_v, euler_field, metric, product};
pub use point::{ManifoldPoint, DEFAULT_FLOOR};
pub use tangent::TangentTriple;
