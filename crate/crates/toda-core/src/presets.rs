//! Seeded points and random generators shared by the tests, the acceptance
//! harness and the command line front end.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::laurent::{LaurentSeries, TruncationParams, C64};
use crate::manifold::ManifoldPoint;

pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The special point `w = z` with the given `v` and `e^u`.
pub fn special_point(v: C64, e_u: C64) -> Result<ManifoldPoint> {
    ManifoldPoint::special(TruncationParams::default(), v, e_u)
}

/// `w = z` with `v = 0`, `e^u = 1/2`: no discrete canonical coordinates.
pub fn special_inside() -> ManifoldPoint {
    special_point(C64::new(0.0, 0.0), C64::new(0.5, 0.0)).expect("admissible preset")
}

/// `w = z` with `v = 0`, `e^u = 4`: two outer critical points at `+-2i`.
pub fn special_outside() -> ManifoldPoint {
    special_point(C64::new(0.0, 0.0), C64::new(4.0, 0.0)).expect("admissible preset")
}

/// Truncation used for the perturbed preset.
pub fn perturbed_params() -> TruncationParams {
    TruncationParams::new(64, 512).expect("valid truncation")
}

/// `w = z + 0.1 z^2 + 0.2 + 0.3/z` with `v = 0.1`, `e^u = 0.02`.
pub fn perturbed() -> ManifoldPoint {
    let params = perturbed_params();
    let c = |x: f64| C64::new(x, 0.0);
    let w = LaurentSeries::from_terms(params.order, &[(2, c(0.1)), (1, c(1.0)), (0, c(0.2)), (-1, c(0.3))])
        .expect("window holds the preset");
    ManifoldPoint::from_w_coords(params, w, c(0.1), c(0.02).ln()).expect("admissible preset")
}

/// The three points on which the Frobenius axioms are exercised.
pub fn frobenius_presets() -> Vec<(&'static str, ManifoldPoint)> {
    vec![
        ("special e^u=1/2", special_inside()),
        ("special e^u=4", special_outside()),
        ("perturbed", perturbed()),
    ]
}
