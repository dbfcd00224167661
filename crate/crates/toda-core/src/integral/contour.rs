use serde::Serialize;

use crate::canonical::{lambda_sigma, WeakFunctional};
use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{ManifoldPoint, TangentTriple};
use crate::specfun::{bessel_i, CoverComplex};

/// Relative change under node doubling accepted as converged.
pub const CONVERGENCE_TOL: f64 = 1e-10;
const MAX_NODES: usize = 1 << 16;

/// Laurent coefficients of `e^{zeta lambda_sigma(z)}` on the window of the point,
/// with the node count doubled until the window is stable.
pub fn exponential_coefficients(pt: &ManifoldPoint, sigma: C64, zeta: C64) -> Result<LaurentSeries> {
    let l = lambda_sigma(pt, sigma);
    let order = pt.order();
    let at = |m: usize| {
        let samples: Vec<C64> = l.samples(m).into_iter().map(|x| (zeta * x).exp()).collect();
        LaurentSeries::from_samples(order, &samples)
    };
    let mut m = pt.nodes();
    let mut coarse = at(m);
    loop {
        let fine = at(2 * m);
        let scale = fine.max_abs_coeff().max(f64::MIN_POSITIVE);
        let change = fine.max_diff(&coarse) / scale;
        if change <= CONVERGENCE_TOL {
            return Ok(fine);
        }
        if 2 * m >= MAX_NODES || !change.is_finite() {
            return Err(TodaError::QuadratureNotConverged { change, nodes: 2 * m });
        }
        m *= 2;
        coarse = fine;
    }
}

/// `y_sigma(zeta) = zeta^{-1/2} (1/2 pi i) \oint e^{zeta lambda_sigma} dz/z`.
pub fn y_sigma(pt: &ManifoldPoint, sigma: C64, zeta: CoverComplex) -> Result<C64> {
    let g = exponential_coefficients(pt, sigma, zeta.to_complex())?;
    Ok(zeta.powf(-0.5) * g.coeff(0))
}

/// The functional `dy_sigma(zeta)` on the truncation window.
pub fn dy_sigma(pt: &ManifoldPoint, sigma: C64, zeta: CoverComplex) -> Result<WeakFunctional> {
    let g = exponential_coefficients(pt, sigma, zeta.to_complex())?;
    let root = zeta.sqrt();
    Ok(WeakFunctional::from_fn(
        pt.order(),
        |m| {
            let weight = if m >= 1 { sigma } else { sigma - 1.0 };
            root * weight * g.coeff(-m)
        },
        root * g.coeff(0),
        root * pt.e_u() * g.coeff(1),
    ))
}

/// Tangent representative of `dy_sigma(zeta)` with respect to the metric.
pub fn dy_representative(pt: &ManifoldPoint, sigma: C64, zeta: CoverComplex) -> Result<TangentTriple> {
    let g = exponential_coefficients(pt, sigma, zeta.to_complex())?;
    let root = zeta.sqrt();
    let zw = pt.z_w_prime();
    let function = &zw.mul(&g).scale(sigma) - &zw.mul(&g.at_least(0));
    Ok(TangentTriple::new(
        function.scale(root),
        root * pt.e_u() * g.coeff(1),
        root * g.coeff(0),
    ))
}

/// Bessel closed form of `dy_sigma(zeta)` at `w = z` with `sigma = sigma(p)`.
pub fn dy_bessel(pt: &ManifoldPoint, p: C64, zeta: CoverComplex) -> Result<WeakFunctional> {
    if !pt.is_special() {
        return Err(TodaError::ParameterOutOfScope {
            detail: "Bessel closed forms hold at w = z only".to_string(),
        });
    }
    let eu = pt.e_u();
    let z = zeta.to_complex();
    let arg = z * eu * 2.0 / p;
    let front = zeta.sqrt() * (z * pt.v()).exp();
    let ratio = eu / (p * p);
    Ok(WeakFunctional::from_fn(
        pt.order(),
        |m| {
            let weight = if m >= 1 { ratio + 1.0 } else { ratio };
            weight * front * p.powi(m as i32) * bessel_i(m, arg)
        },
        front * bessel_i(0, arg),
        eu / p * front * bessel_i(1, arg),
    ))
}

/// Evidence that the integral family annihilates a nonzero tangent vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncompletenessWitness {
    pub max_pairing: f64,
    pub scale: f64,
    pub spill: f64,
}

/// The vector `((1 - e^{-zeta e^u / z}) z, 0, -1)` truncated to the window,
/// with the magnitude of its last kept coefficient as spill estimate.
pub fn incompleteness_vector(pt: &ManifoldPoint, zeta: C64) -> (TangentTriple, f64) {
    let n = pt.order() as i64;
    let a = -zeta * pt.e_u();
    let mut f = LaurentSeries::zeros(pt.order());
    let mut term = C64::new(1.0, 0.0);
    for k in 1..=n + 1 {
        term = term * a / k as f64;
        f.set(1 - k, -term);
    }
    let spill = (term * a / (n + 2) as f64).norm();
    (TangentTriple::new(f, C64::new(0.0, 0.0), C64::new(-1.0, 0.0)), spill)
}

/// Largest `|<dy_sigma(zeta), X>|` over `sigma = sigma(p)` for `p` in `p_grid`,
/// with `X` the incompleteness vector.
pub fn incompleteness_witness(pt: &ManifoldPoint, zeta: CoverComplex, p_grid: &[C64]) -> Result<IncompletenessWitness> {
    let (x, spill) = incompleteness_vector(pt, zeta.to_complex());
    let mut max_pairing = 0.0f64;
    let mut scale = 0.0f64;
    for &p in p_grid {
        let sigma = crate::canonical::sigma_at(pt, p);
        let dy = dy_sigma(pt, sigma, zeta)?;
        max_pairing = max_pairing.max(dy.eval(&x).norm());
        let magnitude = dy.coeffs().iter().map(|c| c.norm()).fold(dy.v.norm().max(dy.u.norm()), f64::max);
        scale = scale.max(magnitude * x.size());
    }
    Ok(IncompletenessWitness { max_pairing, scale, spill })
}
