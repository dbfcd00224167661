use std::f64::consts::PI;

use serde::Serialize;

use crate::canonical::WeakFunctional;
use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::manifold::ManifoldPoint;
use crate::specfun::{bessel_k, CoverComplex};

/// Default half-width of the coefficient window for resummed functionals.
pub const DEFAULT_M_MAX: usize = 12;

/// The resummed weak functional `ds_p(zeta)` on the window `|m| <= m_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResummedFunctional {
    pub p: CoverComplex,
    pub zeta: CoverComplex,
    pub coeffs: WeakFunctional,
    /// Whether the top coefficients grow like `(m-1)! / |zeta e^u|` per step,
    /// the large-order law that keeps these functionals weak.
    pub factorial_growth: bool,
}

pub(crate) fn require_resummable(pt: &ManifoldPoint) -> Result<()> {
    if !pt.is_special() {
        return Err(TodaError::ParameterOutOfScope {
            detail: "resummed functionals are defined at w = z only".to_string(),
        });
    }
    if pt.e_u().norm() >= 1.0 {
        return Err(TodaError::ParameterOutOfScope {
            detail: format!("resummed functionals need |e^u| < 1, got {}", pt.e_u().norm()),
        });
    }
    Ok(())
}

/// `ds_p(zeta)`, with `p` carrying its unwrapped argument and every multivalued
/// factor continued along the cover.
pub fn ds_p(pt: &ManifoldPoint, p: CoverComplex, zeta: CoverComplex, m_max: usize) -> Result<ResummedFunctional> {
    require_resummable(pt)?;
    let e_u = pt.e_u();
    let pc = p.to_complex();
    let x = CoverComplex::new(2.0 * e_u.norm() * zeta.modulus(), zeta.arg() + pt.u().im - p.arg() + PI)?;
    let front = C64::new(0.0, -1.0 / PI) * (zeta.to_complex() * pt.v()).exp() * zeta.sqrt();
    let n = m_max as i64;
    let k: Vec<C64> = (0..=n + 1).map(|j| bessel_k(j, x)).collect();
    let kk = |j: i64| k[j.unsigned_abs() as usize];
    let ratio = e_u / (pc * pc);
    let coeffs = WeakFunctional::from_fn(
        m_max,
        |m| {
            let weight = if m >= 1 { ratio + 1.0 } else { ratio };
            front * weight * C64::from_polar(1.0, m as f64 * p.arg()) * kk(m)
        },
        front * kk(0),
        front * e_u / pc * kk(1),
    );
    let factorial_growth = if n >= 3 {
        let observed = k[n as usize].norm() / k[n as usize - 1].norm();
        let predicted = (n - 1) as f64 / (0.5 * x.modulus());
        (observed / predicted - 1.0).abs() < 0.5
    } else {
        false
    };
    Ok(ResummedFunctional {
        p,
        zeta,
        coeffs,
        factorial_growth,
    })
}

/// `ds_{-p}`, the functional at `arg p - pi`.
pub fn ds_minus_p(pt: &ManifoldPoint, p: CoverComplex, zeta: CoverComplex, m_max: usize) -> Result<ResummedFunctional> {
    ds_p(pt, p.rotate(-PI), zeta, m_max)
}

/// Mismatches of the two monodromy relations
/// `ds_p(zeta e^{2 pi i}) = ds_p(zeta) - 2 ds_{-p}(zeta)` and
/// `ds_{-p}(zeta e^{-2 pi i}) = ds_{-p}(zeta) - 2 ds_p(zeta)`, coefficientwise.
pub fn monodromy_mismatch(pt: &ManifoldPoint, p: CoverComplex, zeta: CoverComplex, m_max: usize) -> Result<(f64, f64)> {
    let plus = ds_p(pt, p, zeta, m_max)?.coeffs;
    let minus = ds_minus_p(pt, p, zeta, m_max)?.coeffs;
    let two = C64::new(2.0, 0.0);
    let forward = ds_p(pt, p, zeta.wind(1), m_max)?.coeffs;
    let backward = ds_minus_p(pt, p, zeta.wind(-1), m_max)?.coeffs;
    let first = relative_gap(&forward, &(&plus - &minus.scale(two)));
    let second = relative_gap(&backward, &(&minus - &plus.scale(two)));
    Ok((first, second))
}

/// Mismatch of `dy_sigma(zeta) = ds_p(zeta) - ds_{-p}(zeta)` on `|m| <= m_max`, with
/// `dy_sigma` supplied by the caller. Each coefficient gap is measured relative to
/// `max(1, |ds_p|, |ds_{-p}|)` for that coefficient.
pub fn difference_mismatch(
    pt: &ManifoldPoint,
    p: CoverComplex,
    zeta: CoverComplex,
    dy: &WeakFunctional,
    m_max: usize,
) -> Result<f64> {
    let plus = ds_p(pt, p, zeta, m_max)?.coeffs;
    let minus = ds_minus_p(pt, p, zeta, m_max)?.coeffs;
    let gap = |target: C64, a: C64, b: C64| (target - (a - b)).norm() / 1f64.max(a.norm()).max(b.norm());
    let n = m_max as i64;
    Ok((-n..=n)
        .map(|m| gap(dy.coeff(m), plus.coeff(m), minus.coeff(m)))
        .fold(gap(dy.v, plus.v, minus.v).max(gap(dy.u, plus.u, minus.u)), f64::max))
}

/// Largest coefficient gap, each measured relative to `max(1, |coefficient|)`.
pub fn relative_gap(a: &WeakFunctional, b: &WeakFunctional) -> f64 {
    let n = a.order().max(b.order()) as i64;
    let rel = |x: C64, y: C64| (x - y).norm() / 1f64.max(x.norm()).max(y.norm());
    (-n..=n)
        .map(|m| rel(a.coeff(m), b.coeff(m)))
        .fold(rel(a.v, b.v).max(rel(a.u, b.u)), f64::max)
}
