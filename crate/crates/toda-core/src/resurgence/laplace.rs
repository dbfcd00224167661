use std::f64::consts::PI;

use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::manifold::ManifoldPoint;
use crate::quadrature::CompositeRule;
use crate::specfun::{bessel_k, CoverComplex};

use super::gevrey::{borel_singularity, phi_series};
use crate::specfun::hypergeometric::hyp2f1_along_ray;

/// Minimal angular distance between the Laplace ray and the Borel singularity.
pub const STOKES_RAY_TOL: f64 = 1e-6;
const PANEL_DEGREE: usize = 20;
const TAIL_EXPONENT: f64 = 45.0;

fn wrap(angle: f64) -> f64 {
    (angle + PI).rem_euclid(2.0 * PI) - PI
}

/// `theta_St = arg e^u - arg p`, the direction of the singularity `4 e^u / p`.
pub fn stokes_direction(pt: &ManifoldPoint, p: CoverComplex) -> f64 {
    pt.u().im - p.arg()
}

/// `zeta` lifted to the half-plane `-theta - pi/2 < arg zeta < -theta + pi/2`,
/// where `theta` is first normalized into `(theta_St, theta_St + 2 pi)`.
pub fn sector_lift(pt: &ManifoldPoint, p: CoverComplex, theta: f64, zeta: C64) -> Result<CoverComplex> {
    let st = stokes_direction(pt, p);
    let normalized = st + (theta - st).rem_euclid(2.0 * PI);
    CoverComplex::lift_near(zeta, -normalized)
}

/// Refinement hint for a ray passing near an integrable singularity: the
/// distance along the ray and the width of the finest panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearSingularity {
    pub position: f64,
    pub finest: f64,
}

/// `zeta \int_{e^{i theta} R_+} fhat(chi) e^{-zeta chi} dchi`, where `borel(d, ts)`
/// returns `fhat(t d)` on ascending `ts` for the unit direction `d`.
pub fn laplace_along_ray<F>(borel: F, theta: f64, zeta: C64, near: Option<NearSingularity>) -> Result<C64>
where
    F: Fn(C64, &[f64]) -> Result<Vec<C64>>,
{
    let direction = C64::from_polar(1.0, theta);
    let rate = (zeta * direction).re;
    if rate <= 1e-12 * zeta.norm() {
        return Err(TodaError::OutOfSector { arg: zeta.arg(), theta });
    }
    let mut end = TAIL_EXPONENT / rate;
    for _ in 0..12 {
        let rule = match near {
            Some(s) if s.position < end => CompositeRule::graded_towards(0.0, end, s.position, s.finest, PANEL_DEGREE),
            _ => CompositeRule::geometric((end / 16.0).min(1.0), end, PANEL_DEGREE),
        };
        let values = borel(direction, &rule.nodes)?;
        let integral: C64 = values
            .iter()
            .zip(rule.nodes.iter().zip(&rule.weights))
            .map(|(f, (t, w))| f * (-zeta * direction * *t).exp() * *w)
            .sum();
        let total = zeta * direction * integral;
        let edge = borel(direction, &[end])?[0];
        let tail = (zeta * edge).norm() * (-rate * end).exp() / rate;
        if tail <= 1e-15 * total.norm().max(1e-300) {
            return Ok(total);
        }
        end *= 1.5;
    }
    Err(TodaError::QuadratureNotConverged { change: f64::NAN, nodes: 0 })
}

fn phi_borel(pt: &ManifoldPoint, p: C64, m: i64) -> impl Fn(C64, &[f64]) -> Result<Vec<C64>> + '_ {
    let a = C64::new(0.5 - m as f64, 0.0);
    let b = C64::new(0.5 + m as f64, 0.0);
    let norm = PI.sqrt().recip();
    let scale = p / (pt.e_u() * 4.0);
    move |direction: C64, ts: &[f64]| {
        Ok(hyp2f1_along_ray(a, b, C64::new(1.0, 0.0), direction * scale, ts)?
            .into_iter()
            .map(|v| v * norm)
            .collect())
    }
}

/// Borel resummation `s_theta(phi_p^m)(zeta)` by quadrature along the ray of argument `theta`.
pub fn laplace_ray(pt: &ManifoldPoint, p: CoverComplex, m: i64, theta: f64, zeta: C64) -> Result<C64> {
    let st = stokes_direction(pt, p);
    let offset = wrap(theta - st);
    if offset.abs() < STOKES_RAY_TOL {
        return Err(TodaError::StokesRay { theta, singular: st });
    }
    let position = (pt.e_u() * 4.0).norm();
    let near = (offset.cos() > 0.0).then(|| NearSingularity {
        position,
        finest: 0.25 * position * offset.sin().abs(),
    });
    laplace_along_ray(phi_borel(pt, p.to_complex(), m), theta, zeta, near)
}

/// `(2/(i pi)) sqrt(e^u/p) e^{-zeta 2e^u/p} zeta^{1/2} K_m(-zeta 2e^u/p)` on the cover,
/// with the square root taken as `-|e^u/p|^{1/2} e^{i(arg e^u - arg p)/2}`.
pub fn resummed_closed_form(pt: &ManifoldPoint, p: CoverComplex, m: i64, zeta: CoverComplex) -> Result<C64> {
    let e_u = pt.e_u().norm();
    let x = CoverComplex::new(2.0 * e_u * zeta.modulus(), zeta.arg() + pt.u().im - p.arg() + PI)?;
    let root = CoverComplex::new(e_u, pt.u().im - p.arg())?.sqrt();
    let front = C64::new(0.0, 2.0 / PI) * root * x.to_complex().exp() * zeta.sqrt();
    Ok(front * bessel_k(m, x))
}

/// Both sides of the lateral-jump identity at `theta_St -+ epsilon`: the ray just below
/// the singular direction minus the ray just above it, and
/// `2i(-1)^{m+1} e^{-zeta 4e^u/p} s_{theta_St}(phi_{-p}^m)(zeta)`.
pub fn lateral_jump(pt: &ManifoldPoint, p: CoverComplex, m: i64, zeta: C64, epsilon: f64) -> Result<(C64, C64)> {
    let st = stokes_direction(pt, p);
    let above = laplace_ray(pt, p, m, st + epsilon, zeta)?;
    let below = laplace_ray(pt, p, m, st - epsilon, zeta)?;
    let opposite = laplace_ray(pt, p.rotate(-PI), m, st, zeta)?;
    let sign = if m.rem_euclid(2) == 0 { -1.0 } else { 1.0 };
    let rhs = C64::new(0.0, 2.0 * sign) * (-zeta * borel_singularity(pt, p.to_complex())).exp() * opposite;
    Ok((below - above, rhs))
}

/// Slope of `log|s(phi_p^m)(zeta) - sum_{k <= truncation} a_k zeta^{-k}|` against `log|zeta|`
/// along the ray of argument `arg` on the cover.
pub fn resummation_slope(
    pt: &ManifoldPoint,
    p: CoverComplex,
    m: i64,
    truncation: usize,
    arg: f64,
    moduli: &[f64],
) -> Result<f64> {
    let series = phi_series(pt, p.to_complex(), m, truncation);
    let mut points = Vec::with_capacity(moduli.len());
    for &r in moduli {
        let zeta = CoverComplex::new(r, arg)?;
        let exact = resummed_closed_form(pt, p, m, zeta)?;
        let err = (exact - series.partial_sum(zeta.to_complex(), truncation)).norm();
        points.push((r.ln(), err.ln()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|q| q.0).sum::<f64>() / n;
    let my = points.iter().map(|q| q.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
