use serde::Serialize;

use crate::canonical::{laurent_roots, lambda_sigma};
use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::manifold::{ManifoldPoint, TangentTriple};
use crate::specfun::gamma::{binomial, gamma_half_integer};
use crate::specfun::CoverComplex;

use super::contour::dy_sigma;
use super::saddle::asymptotic_coeffs_residue;

/// Margin separating two competing exponentials.
pub const SECTOR_MARGIN: f64 = 1e-8;

/// The critical point of `lambda_sigma` whose exponential dominates along `zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominantSaddle {
    pub saddle: C64,
    pub value: C64,
    pub margin: f64,
}

/// Compares `Re(zeta lambda_sigma)` over all critical points of `lambda_sigma`.
pub fn dominant_saddle(pt: &ManifoldPoint, sigma: C64, zeta: C64) -> Result<DominantSaddle> {
    let f = lambda_sigma(pt, sigma);
    let mut ranked: Vec<(C64, C64, f64)> = laurent_roots(&f.derivative())
        .into_iter()
        .map(|z| {
            let value = f.eval(z);
            (z, value, (zeta * value).re)
        })
        .collect();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2));
    let Some(&(saddle, value, top)) = ranked.first() else {
        return Err(TodaError::DegenerateSaddle { second: 0.0 });
    };
    let margin = ranked.get(1).map_or(f64::INFINITY, |r| top - r.2);
    let scale = SECTOR_MARGIN * (1.0 + (zeta * value).norm());
    if margin <= scale {
        return Err(TodaError::AntiStokesDirection { margin });
    }
    Ok(DominantSaddle { saddle, value, margin })
}

/// `c_k^m = binom(m + k - 1/2, 2k) (p / e^u)^k / Gamma(1/2 - k)`.
pub fn bessel_matching_coefficient(pt: &ManifoldPoint, p: C64, k: usize, m: i64) -> C64 {
    (p / pt.e_u()).powi(k as i32) * (binomial(m as f64 + k as f64 - 0.5, 2 * k) / gamma_half_integer(-(k as i64)))
}

/// Free constants `a^1, ..., a^{k_max}` with `a^k = sqrt(pi) c_k^0`, under which
/// the continuous formal solution reproduces the expansion of the integral solution.
pub fn bessel_matching_constants(pt: &ManifoldPoint, p: C64, k_max: usize) -> Vec<C64> {
    (1..=k_max)
        .map(|k| bessel_matching_coefficient(pt, p, k, 0) * std::f64::consts::PI.sqrt())
        .collect()
}

/// Prefactor `sqrt(p / e^u) / (2 sqrt(pi))` relating the two normalizations,
/// with the square root continued from `p / e^u` along the principal branch.
pub fn matching_prefactor(pt: &ManifoldPoint, p: C64) -> C64 {
    (p / pt.e_u()).sqrt() * (0.5 / std::f64::consts::PI.sqrt())
}

/// A least-squares slope of `log|error|` against `log|zeta|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub moduli: Vec<f64>,
    pub errors: Vec<f64>,
}

/// Fits the decay of the normalized truncation error
/// `|e^{-zeta u} <dy_sigma(zeta), X> - sum_{k <= truncation} r^k(X) zeta^{-k}|`
/// along the ray of argument `arg` for `sigma = sigma(p)`.
pub fn truncation_slope(
    pt: &ManifoldPoint,
    p: C64,
    x: &TangentTriple,
    truncation: usize,
    arg: f64,
    moduli: &[f64],
) -> Result<SlopeFit> {
    let sigma = crate::canonical::sigma_at(pt, p);
    let u_p = lambda_sigma(pt, sigma).eval(p);
    let coeffs = asymptotic_coeffs_residue(pt, sigma, p, truncation, x, CoverComplex::unit(arg))?;
    let mut errors = Vec::with_capacity(moduli.len());
    for &r in moduli {
        let zeta = CoverComplex::new(r, arg)?;
        let z = zeta.to_complex();
        let exact = dy_sigma(pt, sigma, zeta)?.eval(x) * (-z * u_p).exp();
        let partial: C64 = coeffs.iter().enumerate().map(|(k, c)| c * z.powi(-(k as i32))).sum();
        errors.push((exact - partial).norm());
    }
    let xs: Vec<f64> = moduli.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(SlopeFit {
        slope: sxy / sxx,
        moduli: moduli.to_vec(),
        errors,
    })
}
