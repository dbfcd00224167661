use thiserror::Error;

/// Every failure mode raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TodaError {
    #[error("series under-resolved: edge spill {spill:.3e} exceeds threshold {threshold:.3e}")]
    UnderResolved { spill: f64, threshold: f64 },
    #[error("leading coefficient of the inner superpotential vanishes (|e^u| = {modulus:.3e})")]
    T1Violation { modulus: f64 },
    #[error("w'(z) vanishes on the unit circle (min |w'| = {min_modulus:.3e})")]
    T2Violation { min_modulus: f64 },
    #[error("critical point {root} lies on the excluded circle (distance {distance:.3e})")]
    BoundaryRoot { root: String, distance: f64 },
    #[error("critical point {root} is degenerate (|second derivative| = {second:.3e})")]
    DegenerateCritical { root: String, second: f64 },
    #[error("finite-difference extrapolation disagrees by {disagreement:.3e} (allowed {allowed:.3e})")]
    StepTooLarge { disagreement: f64, allowed: f64 },
    #[error("kernel projection {projection:.3e} cannot be cancelled at order {order}")]
    SolvabilityFailure { order: usize, projection: f64 },
    #[error("quadrature not converged: relative change {change:.3e} after {nodes} nodes")]
    QuadratureNotConverged { change: f64, nodes: usize },
    #[error("saddle is degenerate (|f''| = {second:.3e})")]
    DegenerateSaddle { second: f64 },
    #[error("local inversion of the fractional power did not converge: {detail}")]
    BranchAmbiguity { detail: String },
    #[error("zeta lies on an anti-Stokes direction (margin {margin:.3e})")]
    AntiStokesDirection { margin: f64 },
    #[error("evaluation regimes disagree by {mismatch:.3e} at |z| = {modulus:.3}")]
    OverlapMismatch { mismatch: f64, modulus: f64 },
    #[error("parameters out of scope: {detail}")]
    ParameterOutOfScope { detail: String },
    #[error("Laplace ray theta = {theta:.6} hits the Borel singularity direction {singular:.6}")]
    StokesRay { theta: f64, singular: f64 },
    #[error("zeta with arg {arg:.6} is outside the half-plane of the ray theta = {theta:.6}")]
    OutOfSector { arg: f64, theta: f64 },
    #[error("matrix rank {rank} below required {required}")]
    RankDeficient { rank: usize, required: usize },
    #[error("linear system ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("report does not contain series `{0}`")]
    MissingSeries(String),
}

pub type Result<T> = std::result::Result<T, TodaError>;
