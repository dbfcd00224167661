use serde::Serialize;

use crate::error::Result;
use crate::laurent::C64;
use crate::manifold::ManifoldPoint;
use crate::specfun::gamma::{binomial, factorial, gamma_half_integer};
use crate::specfun::hyp2f1;

/// A truncated formal power series `sum_k a_k zeta^{-k}` with a Gevrey-1 witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GevreySeries {
    pub coeffs: Vec<C64>,
    /// Smallest `C` with `|a_k| <= C^k k!` over the stored range.
    pub growth_certificate: f64,
}

impl GevreySeries {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let growth_certificate = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| (a.norm() / factorial(k)).powf(1.0 / k as f64))
            .fold(0.0, f64::max);
        Self {
            coeffs,
            growth_certificate,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum_{k <= truncation} a_k zeta^{-k}`.
    pub fn partial_sum(&self, zeta: C64, truncation: usize) -> C64 {
        let inv = zeta.inv();
        let mut pow = C64::new(1.0, 0.0);
        let mut sum = C64::new(0.0, 0.0);
        for a in self.coeffs.iter().take(truncation + 1) {
            sum += a * pow;
            pow *= inv;
        }
        sum
    }
}

/// `phi_p^m = sum_k binom(m+k-1/2, 2k) (p / (zeta e^u))^k / Gamma(1/2 - k)` up to `k = k_max`.
pub fn phi_series(pt: &ManifoldPoint, p: C64, m: i64, k_max: usize) -> GevreySeries {
    let ratio = p / pt.e_u();
    GevreySeries::new(
        (0..=k_max)
            .map(|k| {
                ratio.powi(k as i32) * (binomial(m as f64 + k as f64 - 0.5, 2 * k) / gamma_half_integer(-(k as i64)))
            })
            .collect(),
    )
}

/// Borel coefficients `b_k = a_k / k!`.
pub fn borel(series: &GevreySeries) -> Vec<C64> {
    series.coeffs.iter().enumerate().map(|(k, a)| a / factorial(k)).collect()
}

/// `(1/sqrt(pi)) 2F1(1/2 - m, 1/2 + m; 1; p chi / (4 e^u))`.
pub fn borel_closed_form(pt: &ManifoldPoint, p: C64, m: i64, chi: C64) -> Result<C64> {
    let a = C64::new(0.5 - m as f64, 0.0);
    let b = C64::new(0.5 + m as f64, 0.0);
    let value = hyp2f1(a, b, C64::new(1.0, 0.0), p * chi / (pt.e_u() * 4.0))?;
    Ok(value / std::f64::consts::PI.sqrt())
}

/// The position `4 e^u / p` of the Borel singularity.
pub fn borel_singularity(pt: &ManifoldPoint, p: C64) -> C64 {
    pt.e_u() * 4.0 / p
}

/// Radius of convergence from the upper half of the coefficients, assuming the
/// `|b_k| ~ k^{-1} R^{-k}` law of a logarithmic branch point.
pub fn borel_radius_estimate(b: &[C64]) -> f64 {
    let points: Vec<(f64, f64)> = b
        .iter()
        .enumerate()
        .skip(b.len() / 2)
        .filter(|(k, c)| *k > 0 && c.norm() > 0.0)
        .map(|(k, c)| (k as f64, c.norm().ln() + (k as f64).ln()))
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (-sxy / sxx).exp()
}
