use serde::Serialize;

use crate::canonical::critical::{CriticalPoint, CriticalSet};
use crate::canonical::functional::WeakFunctional;
use crate::error::Result;
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{apply_u, ManifoldPoint, TangentTriple, DEFAULT_FLOOR};

/// `sigma(z) = lambda'(z) / w'(z)` re-expanded from the grid.
pub fn sigma_curve(pt: &ManifoldPoint) -> Result<LaurentSeries> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let m = pt.nodes();
    Ok(pt.outer().derivative().div_grid(pt.w_prime(), m))
}

/// `sigma(p)` by direct evaluation of the two derivatives.
pub fn sigma_at(pt: &ManifoldPoint, p: C64) -> C64 {
    pt.outer().derivative().eval(p) / pt.w_prime().eval(p)
}

/// `lambda_sigma = sigma lambdabar + (sigma - 1) lambda`.
pub fn lambda_sigma(pt: &ManifoldPoint, sigma: C64) -> LaurentSeries {
    &pt.inner().scale(sigma) + &pt.outer().scale(sigma - 1.0)
}

/// Continuous canonical coordinate `u_p = lambda_{sigma(p)}(p)`.
pub fn canonical_value(pt: &ManifoldPoint, p: C64) -> Result<C64> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let sigma = sigma_at(pt, p);
    Ok(sigma * pt.inner().eval(p) + (sigma - 1.0) * pt.outer().eval(p))
}

/// `d u_p / dp = sigma'(p) w(p)`.
pub fn canonical_value_derivative(pt: &ManifoldPoint, p: C64) -> C64 {
    let outer_d = pt.outer().derivative();
    let wp = pt.w_prime();
    let sigma_prime = (outer_d.derivative().eval(p) * wp.eval(p) - outer_d.eval(p) * wp.derivative().eval(p))
        / wp.eval(p).powi(2);
    sigma_prime * pt.w().eval(p)
}

/// `<dlambda_sigma(z), X> = (sigma - 1) X(z) + sigma Xbar(z)` as a functional,
/// for a fixed `sigma` and evaluation point `z`.
pub fn dlambda_functional(pt: &ManifoldPoint, sigma: C64, z: C64) -> WeakFunctional {
    WeakFunctional::from_fn(
        pt.order(),
        |m| if m >= 1 { sigma * z.powi(m as i32) } else { (sigma - 1.0) * z.powi(m as i32) },
        C64::new(1.0, 0.0),
        pt.e_u() / z,
    )
}

/// `<dlambda_sigma(z), X>` for every `z` at once, as a series in `z`.
pub fn dlambda_series(pt: &ManifoldPoint, sigma: C64, x: &TangentTriple) -> LaurentSeries {
    let n = pt.order();
    let mut s = &x.function.scale(sigma - 1.0) + &x.function.at_least(1);
    s += &LaurentSeries::from_terms(n, &[(0, x.v), (-1, pt.e_u() * x.u)]).expect("|k| <= 1");
    s
}

/// The continuous eigen-functional `du_p`.
pub fn du_continuous(pt: &ManifoldPoint, p: C64) -> WeakFunctional {
    dlambda_functional(pt, sigma_at(pt, p), p)
}

/// `du_i = -X(z_i)` for an outer critical point.
pub fn du_outer(pt: &ManifoldPoint, z: C64) -> WeakFunctional {
    WeakFunctional::from_fn(
        pt.order(),
        |m| if m <= 0 { -z.powi(m as i32) } else { C64::new(0.0, 0.0) },
        C64::new(1.0, 0.0),
        pt.e_u() / z,
    )
}

/// `dubar_j = Xbar(zbar_j)` for an inner critical point.
pub fn du_inner(pt: &ManifoldPoint, z: C64) -> WeakFunctional {
    WeakFunctional::from_fn(
        pt.order(),
        |m| if m >= 1 { z.powi(m as i32) } else { C64::new(0.0, 0.0) },
        C64::new(1.0, 0.0),
        pt.e_u() / z,
    )
}

/// Representative `(z w' c/(z - c), e^u/c, 1)` of the discrete eigen-covector at
/// a critical point `c` off the unit circle.
pub fn eigen_representative(pt: &ManifoldPoint, c: C64) -> TangentTriple {
    let n = pt.order() as i64;
    let mut kernel = LaurentSeries::zeros(pt.order());
    if c.norm() > 1.0 {
        for k in 0..=n {
            kernel.set(k, -c.powi(-(k as i32)));
        }
    } else {
        for k in 1..=n {
            kernel.set(-k, c.powi(k as i32));
        }
    }
    TangentTriple::new(pt.z_w_prime().mul(&kernel), pt.e_u() / c, C64::new(1.0, 0.0))
}

/// Eigen-covectors of the Euler multiplication at a point.
#[derive(Debug, Clone, Serialize)]
pub struct EigenFunctionals {
    pub continuous: Vec<(C64, C64, WeakFunctional)>,
    pub outer: Vec<(CriticalPoint, WeakFunctional, TangentTriple)>,
    pub inner: Vec<(CriticalPoint, WeakFunctional, TangentTriple)>,
}

pub fn eigen_functionals(pt: &ManifoldPoint, crit: &CriticalSet, p_grid: &[C64]) -> Result<EigenFunctionals> {
    let continuous = p_grid
        .iter()
        .map(|&p| Ok((p, canonical_value(pt, p)?, du_continuous(pt, p))))
        .collect::<Result<Vec<_>>>()?;
    let outer = crit
        .outer
        .iter()
        .map(|c| (*c, du_outer(pt, c.z), eigen_representative(pt, c.z)))
        .collect();
    let inner = crit
        .inner
        .iter()
        .map(|c| (*c, du_inner(pt, c.z), eigen_representative(pt, c.z)))
        .collect();
    Ok(EigenFunctionals { continuous, outer, inner })
}

/// `|<xi, U X> - value <xi, X>|`.
pub fn eigen_residual(pt: &ManifoldPoint, xi: &WeakFunctional, value: C64, x: &TangentTriple) -> Result<f64> {
    let ux = apply_u(pt, x)?;
    Ok((xi.eval(&ux) - value * xi.eval(x)).norm())
}
