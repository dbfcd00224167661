use std::f64::consts::PI;

use serde::Serialize;

use crate::canonical::{dlambda_series, lambda_sigma, WeakFunctional};
use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{ManifoldPoint, TangentTriple};
use crate::specfun::gamma::{binomial, gamma_half_integer};
use crate::specfun::CoverComplex;

/// Curvatures below this modulus make a saddle degenerate.
pub const SADDLE_FLOOR: f64 = 1e-12;

/// Coefficients of the large-`zeta` expansion
/// `zeta^{1/2} \int_C e^{zeta f} g dz ~ e^{zeta f(z0)} sum_n d_n zeta^{-n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaddleExpansion {
    pub saddle: C64,
    pub value: C64,
    pub curvature: C64,
    pub sqrt_curvature: C64,
    pub direction: C64,
    pub coeffs: Vec<C64>,
}

/// Taylor coefficients of a Laurent polynomial about `z0`, up to `t^{len-1}`.
pub fn taylor_at(f: &LaurentSeries, z0: C64, len: usize) -> Vec<C64> {
    (0..len)
        .map(|j| {
            f.terms()
                .filter(|&(k, c)| c != C64::new(0.0, 0.0) && !(0..j as i64).contains(&k))
                .map(|(k, c)| c * binomial(k as f64, j) * z0.powi((k - j as i64) as i32))
                .sum()
        })
        .collect()
}

/// Power series of `q^alpha` for `q(0) = 1`, truncated to `len` terms.
pub fn series_power(q: &[C64], alpha: f64, len: usize) -> Vec<C64> {
    let mut p = vec![C64::new(0.0, 0.0); len];
    if len == 0 {
        return p;
    }
    p[0] = C64::new(1.0, 0.0);
    for n in 1..len {
        let mut acc = C64::new(0.0, 0.0);
        for j in 1..=n.min(q.len() - 1) {
            acc += q[j] * p[n - j] * ((alpha + 1.0) * j as f64 - n as f64);
        }
        p[n] = acc / n as f64;
    }
    p
}

fn series_product_coeff(a: &[C64], b: &[C64], n: usize) -> C64 {
    (0..=n).filter(|&j| j < a.len() && n - j < b.len()).map(|j| a[j] * b[n - j]).sum()
}

/// Steepest-descent expansion at a nondegenerate critical point `z0` of `f`.
///
/// The path crosses `z0` along the steepest-descent direction closest to
/// `orientation`; the branch of `c^{1/2}` is the one for which the expansion
/// reproduces the Gaussian integral along that oriented path at `zeta`.
pub fn saddle_coeffs(
    f: &LaurentSeries,
    g: &LaurentSeries,
    z0: C64,
    n_max: usize,
    zeta: CoverComplex,
    orientation: C64,
) -> Result<SaddleExpansion> {
    let len = 2 * n_max + 3;
    let ft = taylor_at(f, z0, len + 1);
    let gt = taylor_at(g, z0, len);
    let scale = ft.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if ft[1].norm() > 1e-8 * scale {
        return Err(TodaError::BranchAmbiguity {
            detail: format!("z0 is not a critical point (|f'| = {:.3e})", ft[1].norm()),
        });
    }
    let c = ft[2];
    if c.norm() < SADDLE_FLOOR {
        return Err(TodaError::DegenerateSaddle { second: 2.0 * c.norm() });
    }
    let zc = zeta.to_complex();
    let steep = (-zc * c).sqrt().inv();
    let along = (steep * orientation.conj()).re;
    if along.abs() < 1e-8 * steep.norm() * orientation.norm() {
        return Err(TodaError::BranchAmbiguity {
            detail: "orientation is perpendicular to the steepest-descent direction".to_string(),
        });
    }
    let direction = if along > 0.0 { steep } else { -steep } / steep.norm();
    let gauss = (-zc * c * direction * direction).sqrt();
    let sqrt_curvature = C64::i() * gauss / (zeta.sqrt() * direction);
    let h: Vec<C64> = ft[2..].iter().map(|a| a / c).collect();
    let i = C64::i();
    let coeffs = (0..=n_max)
        .map(|n| {
            let alpha = -(n as f64) - 0.5;
            let inv = series_power(&h, alpha, 2 * n + 1);
            let s = series_product_coeff(&gt, &inv, 2 * n);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            i * sign * gamma_half_integer(n as i64) * s / (c.powi(n as i32) * sqrt_curvature)
        })
        .collect();
    Ok(SaddleExpansion {
        saddle: z0,
        value: ft[0],
        curvature: c,
        sqrt_curvature,
        direction,
        coeffs,
    })
}

/// Coefficients `r^k(X)` for `k <= k_max` of the asymptotic expansion of
/// `<dy_sigma(zeta), X>` at the critical point `z0` of `lambda_sigma`, for `zeta`
/// in the sector represented by `zeta`. The circle is taken counter-clockwise.
pub fn asymptotic_coeffs_residue(
    pt: &ManifoldPoint,
    sigma: C64,
    z0: C64,
    k_max: usize,
    x: &TangentTriple,
    zeta: CoverComplex,
) -> Result<Vec<C64>> {
    let f = lambda_sigma(pt, sigma);
    let g = dlambda_series(pt, sigma, x).shift(-1).scale(C64::new(0.0, -1.0 / (2.0 * PI)));
    Ok(saddle_coeffs(&f, &g, z0, k_max, zeta, C64::i() * z0)?.coeffs)
}

/// The same coefficients as functionals on the window, one per order.
pub fn asymptotic_functionals(
    pt: &ManifoldPoint,
    sigma: C64,
    z0: C64,
    k_max: usize,
    zeta: CoverComplex,
) -> Result<Vec<WeakFunctional>> {
    let n = pt.order() as i64;
    let per = |x: &TangentTriple| asymptotic_coeffs_residue(pt, sigma, z0, k_max, x, zeta);
    let basis: Vec<Vec<C64>> = (-n..=n)
        .map(|m| per(&TangentTriple::basis_power(pt.order(), m)))
        .collect::<Result<_>>()?;
    let on_v = per(&TangentTriple::unit(pt.order()))?;
    let on_u = per(&TangentTriple::basis_u(pt.order()))?;
    Ok((0..=k_max)
        .map(|k| WeakFunctional::from_fn(pt.order(), |m| basis[(m + n) as usize][k], on_v[k], on_u[k]))
        .collect())
}
